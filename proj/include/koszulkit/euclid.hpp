#pragma once

// Euclidean-domain operations shared by the Hermite-style column echelon and
// Smith normal form: integers and univariate polynomials over a field.
// Canonical unit normalization is "positive" for integers and "monic" for
// polynomials.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "koszulkit/matrix.hpp"
#include "koszulkit/numeric.hpp"
#include "koszulkit/polynomial.hpp"

namespace koszulkit {

template <class R>
struct EuclideanOps;

template <>
struct EuclideanOps<Int> {
  static bool norm_less(const Int& a, const Int& b) {
    if (is_zero(a)) return !is_zero(b);
    if (is_zero(b)) return false;
    return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0;
  }
  static std::pair<Int, Int> divmod(const Int& a, const Int& b) {
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return {q, r};
  }
  // unit u with a*u canonical (nonnegative)
  static Int canonical_unit(const Int& a) { return a < 0 ? Int(-1) : Int(1); }
};

template <class F>
struct EuclideanOps<Poly<F>> {
  using P = Poly<F>;
  static void require_univariate(const P& a) {
    if (a.max_var() > 1)
      throw std::invalid_argument("euclidean polynomial arithmetic needs univariate input");
  }
  static bool norm_less(const P& a, const P& b) {
    if (a.zero()) return !b.zero();
    if (b.zero()) return false;
    return a.degree() < b.degree();
  }
  static std::pair<P, P> divmod(P a, const P& b) {
    require_univariate(a);
    require_univariate(b);
    if (b.zero()) throw std::invalid_argument("polynomial division by zero");
    P q;
    const auto& lb = b.terms().front();  // univariate: first term has top degree
    while (!a.zero() && a.degree() >= b.degree()) {
      const auto& la = a.terms().front();
      P t = P::monomial(expo_div(la.e, lb.e), la.c / lb.c);
      q += t;
      a -= b * t;
    }
    return {q, a};
  }
  static P canonical_unit(const P& a) {
    if (a.zero()) return P(1);
    return P(F(1) / a.terms().front().c);
  }
};

template <class R>
struct EchelonResult {
  Matrix<R> h;  // column echelon form, pivot columns first
  Matrix<R> u;  // unimodular, input * u = h
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col), rows increasing
};

// Column echelon over a Euclidean domain by repeated remainder exchange.
// Pivot columns end up leftmost with canonical-unit pivot entries; every
// column at index >= rank is zero, so the matching columns of `u` are a basis
// of the kernel.
template <class R>
EchelonResult<R> euclidean_column_echelon(Matrix<R> a) {
  using Ops = EuclideanOps<R>;
  const std::size_t n = a.rows(), k = a.cols();
  Matrix<R> u = Matrix<R>::identity(k);
  auto col_axpy = [&](std::size_t dst, std::size_t src, const R& q) {
    for (std::size_t i = 0; i < n; ++i) a.at(i, dst) = a.at(i, dst) - q * a.at(i, src);
    for (std::size_t i = 0; i < k; ++i) u.at(i, dst) = u.at(i, dst) - q * u.at(i, src);
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t i = 0; i < n; ++i) std::swap(a.at(i, x), a.at(i, y));
    for (std::size_t i = 0; i < k; ++i) std::swap(u.at(i, x), u.at(i, y));
  };
  auto col_scale = [&](std::size_t x, const R& s) {
    for (std::size_t i = 0; i < n; ++i) a.at(i, x) = a.at(i, x) * s;
    for (std::size_t i = 0; i < k; ++i) u.at(i, x) = u.at(i, x) * s;
  };
  EchelonResult<R> out;
  std::size_t c = 0;
  for (std::size_t r = 0; r < n && c < k; ++r) {
    while (true) {
      std::size_t best = k;
      for (std::size_t j = c; j < k; ++j) {
        if (is_zero(a.at(r, j))) continue;
        if (best == k || Ops::norm_less(a.at(r, j), a.at(r, best))) best = j;
      }
      if (best == k) break;  // row r has no entry among the open columns
      col_swap(c, best);
      bool clean = true;
      for (std::size_t j = c + 1; j < k; ++j) {
        if (is_zero(a.at(r, j))) continue;
        auto [q, rem] = Ops::divmod(a.at(r, j), a.at(r, c));
        col_axpy(j, c, q);
        if (!is_zero(rem)) clean = false;
      }
      if (clean) {
        col_scale(c, Ops::canonical_unit(a.at(r, c)));
        out.pivots.push_back({r, c});
        ++c;
        break;
      }
    }
  }
  out.h = std::move(a);
  out.u = std::move(u);
  return out;
}

}  // namespace koszulkit
