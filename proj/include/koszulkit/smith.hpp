#pragma once

// Smith normal form over a Euclidean domain (integers, univariate k[x]):
// unimodular U, V with U*M*V diagonal, each diagonal entry dividing the next,
// entries unit-normalized (nonnegative / monic).  The transforms are returned
// so the factorization can be replayed and checked independently.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "koszulkit/euclid.hpp"
#include "koszulkit/matrix.hpp"
#include "koszulkit/solver.hpp"

namespace koszulkit {

inline bool euclid_is_unit(const Int& a) { return a == 1 || a == -1; }
template <class F>
bool euclid_is_unit(const Poly<F>& a) {
  return !a.zero() && a.constant();
}

template <class R>
struct SmithResult {
  Matrix<R> u, d, v;       // u * input * v = d
  std::vector<R> invariants;  // nonzero diagonal of d, in order
};

template <class R>
SmithResult<R> smith_normal_form(const Matrix<R>& input) {
  using Ops = EuclideanOps<R>;
  const std::size_t n = input.rows(), k = input.cols();
  Matrix<R> m = input;
  Matrix<R> u = Matrix<R>::identity(n);
  Matrix<R> v = Matrix<R>::identity(k);
  auto row_swap = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t j = 0; j < k; ++j) std::swap(m.at(x, j), m.at(y, j));
    for (std::size_t j = 0; j < n; ++j) std::swap(u.at(x, j), u.at(y, j));
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t i = 0; i < n; ++i) std::swap(m.at(i, x), m.at(i, y));
    for (std::size_t i = 0; i < k; ++i) std::swap(v.at(i, x), v.at(i, y));
  };
  auto row_axpy = [&](std::size_t dst, std::size_t src, const R& q) {  // row dst -= q * row src
    for (std::size_t j = 0; j < k; ++j) m.at(dst, j) = m.at(dst, j) - q * m.at(src, j);
    for (std::size_t j = 0; j < n; ++j) u.at(dst, j) = u.at(dst, j) - q * u.at(src, j);
  };
  auto col_axpy = [&](std::size_t dst, std::size_t src, const R& q) {
    for (std::size_t i = 0; i < n; ++i) m.at(i, dst) = m.at(i, dst) - q * m.at(i, src);
    for (std::size_t i = 0; i < k; ++i) v.at(i, dst) = v.at(i, dst) - q * v.at(i, src);
  };
  auto row_scale = [&](std::size_t x, const R& s) {
    for (std::size_t j = 0; j < k; ++j) m.at(x, j) = m.at(x, j) * s;
    for (std::size_t j = 0; j < n; ++j) u.at(x, j) = u.at(x, j) * s;
  };

  SmithResult<R> out;
  for (std::size_t t = 0; t < n && t < k; ++t) {
    // locate a minimal-norm nonzero entry in the open submatrix
    bool any = false;
    for (std::size_t i = t; i < n && !any; ++i)
      for (std::size_t j = t; j < k && !any; ++j)
        if (!is_zero(m.at(i, j))) any = true;
    if (!any) break;
    while (true) {
      std::size_t pi = t, pj = t;
      bool have = false;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < k; ++j) {
          if (is_zero(m.at(i, j))) continue;
          if (!have || Ops::norm_less(m.at(i, j), m.at(pi, pj))) {
            pi = i;
            pj = j;
            have = true;
          }
        }
      row_swap(t, pi);
      col_swap(t, pj);
      bool disturbed = false;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (is_zero(m.at(i, t))) continue;
        auto [q, r] = Ops::divmod(m.at(i, t), m.at(t, t));
        row_axpy(i, t, q);
        if (!is_zero(r)) disturbed = true;
      }
      for (std::size_t j = t + 1; j < k; ++j) {
        if (is_zero(m.at(t, j))) continue;
        auto [q, r] = Ops::divmod(m.at(t, j), m.at(t, t));
        col_axpy(j, t, q);
        if (!is_zero(r)) disturbed = true;
      }
      if (disturbed) continue;
      // pivot row/column clear: enforce divisibility into the remainder block
      std::size_t bi = n;
      for (std::size_t i = t + 1; i < n && bi == n; ++i)
        for (std::size_t j = t + 1; j < k; ++j) {
          auto [q, r] = Ops::divmod(m.at(i, j), m.at(t, t));
          (void)q;
          if (!is_zero(r)) {
            bi = i;
            break;
          }
        }
      if (bi == n) break;
      row_axpy(t, bi, R(0) - R(1));  // pull the offending row in and go again
    }
    row_scale(t, Ops::canonical_unit(m.at(t, t)));
  }
  out.u = std::move(u);
  out.v = std::move(v);
  for (std::size_t t = 0; t < n && t < k; ++t)
    if (!is_zero(m.at(t, t))) out.invariants.push_back(m.at(t, t));
  out.d = std::move(m);
  return out;
}

// Full independent check of a Smith factorization of `input`.
template <class R>
bool smith_verify(const Matrix<R>& input, const SmithResult<R>& s) {
  if (!(s.u * input * s.v == s.d)) return false;
  if (!euclid_is_unit(det_exact(s.u)) || !euclid_is_unit(det_exact(s.v))) return false;
  for (std::size_t i = 0; i < s.d.rows(); ++i)
    for (std::size_t j = 0; j < s.d.cols(); ++j)
      if (i != j && !is_zero(s.d.at(i, j))) return false;
  std::size_t r = 0;
  for (std::size_t t = 0; t < s.d.rows() && t < s.d.cols(); ++t) {
    const R& dt = s.d.at(t, t);
    if (is_zero(dt)) {
      // once zero, stays zero
      for (std::size_t s2 = t; s2 < s.d.rows() && s2 < s.d.cols(); ++s2)
        if (!is_zero(s.d.at(s2, s2))) return false;
      break;
    }
    if (r >= s.invariants.size() || !(s.invariants[r] == dt)) return false;
    ++r;
    if (t > 0) {
      auto [q, rem] = EuclideanOps<R>::divmod(dt, s.d.at(t - 1, t - 1));
      (void)q;
      if (!is_zero(rem)) return false;
    }
    if (!(dt == dt * EuclideanOps<R>::canonical_unit(dt))) return false;  // canonical unit form
  }
  return r == s.invariants.size();
}

}  // namespace koszulkit
