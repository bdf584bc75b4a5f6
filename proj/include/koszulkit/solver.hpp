#pragma once

// Uniform exact linear algebra over the supported coefficient rings: solving
// M*x = b with explicit witnesses and computing kernels (syzygies of the
// columns).  Fields go through Gauss-Jordan elimination, polynomial rings
// through the Groebner engine, and the integers through a Euclidean column
// echelon.  Also home to fraction-free rank/determinant (Bareiss), which give
// an independent cross-check for injectivity over domains.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "koszulkit/euclid.hpp"
#include "koszulkit/groebner.hpp"
#include "koszulkit/matrix.hpp"
#include "koszulkit/ring.hpp"

namespace koszulkit {

// --- exact division (for Bareiss) -------------------------------------------

inline Int exact_div(const Int& a, const Int& b) {
  Int q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (!is_zero(r)) throw std::logic_error("exact_div: inexact integer division");
  return q;
}
inline Rat exact_div(const Rat& a, const Rat& b) { return a / b; }
inline Fp exact_div(const Fp& a, const Fp& b) { return a / b; }

template <class F>
Poly<F> exact_div(Poly<F> a, const Poly<F>& b) {
  if (b.zero()) throw std::logic_error("exact_div: polynomial division by zero");
  Poly<F> q;
  const auto& lb = b.terms().front();
  while (!a.zero()) {
    const auto& la = a.terms().front();
    if (!expo_divides(lb.e, la.e)) throw std::logic_error("exact_div: inexact polynomial division");
    Poly<F> t = Poly<F>::monomial(expo_div(la.e, lb.e), la.c / lb.c);
    q += t;
    a -= b * t;
  }
  return q;
}

// --- fraction-free elimination ----------------------------------------------

template <class R>
struct BareissResult {
  std::size_t rank = 0;
  R det = R(0);  // meaningful for square input only
  int sign = 1;
};

template <class R>
BareissResult<R> bareiss_eliminate(Matrix<R> m) {
  BareissResult<R> out;
  const std::size_t n = m.rows(), k = m.cols();
  R prev(1);
  std::size_t r = 0, c = 0;
  while (r < n && c < k) {
    std::size_t pr = n, pc = k;
    for (std::size_t j = c; j < k && pr == n; ++j)
      for (std::size_t i = r; i < n; ++i)
        if (!is_zero(m.at(i, j))) {
          pr = i;
          pc = j;
          break;
        }
    if (pr == n) break;
    if (pr != r) {
      for (std::size_t j = 0; j < k; ++j) std::swap(m.at(r, j), m.at(pr, j));
      out.sign = -out.sign;
    }
    if (pc != c) {
      for (std::size_t i = 0; i < n; ++i) std::swap(m.at(i, c), m.at(i, pc));
      out.sign = -out.sign;
    }
    for (std::size_t i = r + 1; i < n; ++i) {
      for (std::size_t j = c + 1; j < k; ++j)
        m.at(i, j) = exact_div(m.at(i, j) * m.at(r, c) - m.at(i, c) * m.at(r, j), prev);
      m.at(i, c) = R(0);
    }
    prev = m.at(r, c);
    ++r;
    ++c;
    ++out.rank;
  }
  if (n == k) {
    if (out.rank < n) {
      out.det = R(0);
    } else {
      out.det = prev;
      if (out.sign < 0) out.det = R(0) - out.det;
    }
  }
  return out;
}

template <class R>
std::size_t rank_exact(const Matrix<R>& m) {
  return bareiss_eliminate(m).rank;
}

template <class R>
R det_exact(const Matrix<R>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det_exact: matrix not square");
  if (m.rows() == 0) return R(1);
  return bareiss_eliminate(m).det;
}

// --- Gauss-Jordan over a field ----------------------------------------------

template <class R>
struct RrefResult {
  Matrix<R> r;                       // reduced row echelon form
  Matrix<R> t;                       // t * input = r
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

template <class R>
RrefResult<R> rref(const Matrix<R>& a) {
  static_assert(RingTraits<R>::is_field, "rref needs field coefficients");
  RrefResult<R> out;
  out.r = a;
  out.t = Matrix<R>::identity(a.rows());
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = a.rows();
    for (std::size_t i = row; i < a.rows(); ++i)
      if (!is_zero(out.r.at(i, col))) {
        p = i;
        break;
      }
    if (p == a.rows()) continue;
    if (p != row) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(out.r.at(row, j), out.r.at(p, j));
      for (std::size_t j = 0; j < a.rows(); ++j) std::swap(out.t.at(row, j), out.t.at(p, j));
    }
    R inv = R(1) / out.r.at(row, col);
    for (std::size_t j = 0; j < a.cols(); ++j) out.r.at(row, j) = out.r.at(row, j) * inv;
    for (std::size_t j = 0; j < a.rows(); ++j) out.t.at(row, j) = out.t.at(row, j) * inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || is_zero(out.r.at(i, col))) continue;
      R f = out.r.at(i, col);
      for (std::size_t j = 0; j < a.cols(); ++j)
        out.r.at(i, j) = out.r.at(i, j) - f * out.r.at(row, j);
      for (std::size_t j = 0; j < a.rows(); ++j)
        out.t.at(i, j) = out.t.at(i, j) - f * out.t.at(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  return out;
}

// --- the uniform solver -----------------------------------------------------

template <class P>
struct poly_scalar;
template <class F>
struct poly_scalar<Poly<F>> {
  using type = F;
};

// Answers span questions about the columns of `gens` in R^rows: lift targets
// through them (gens * X = targets) or present the syzygies among them.
template <class R>
class LinSolver {
public:
  LinSolver(const RingCtx<R>& ctx, Matrix<R> gens) : gens_(std::move(gens)) {
    (void)ctx;
    if constexpr (RingTraits<R>::is_field) {
      rr_ = rref(gens_);
    } else if constexpr (RingTraits<R>::is_polynomial) {
      gb_.emplace(gens_, ctx.order);
    } else {
      ech_ = euclidean_column_echelon(gens_);
    }
  }

  std::size_t rows() const { return gens_.rows(); }
  std::size_t cols() const { return gens_.cols(); }

  std::optional<Matrix<R>> lift(const Matrix<R>& targets) const {
    if (targets.rows() != gens_.rows()) throw std::invalid_argument("lift: shape mismatch");
    if constexpr (RingTraits<R>::is_field) {
      const auto& rr = *rr_;
      Matrix<R> tb = rr.t * targets;
      Matrix<R> x(gens_.cols(), targets.cols());
      for (std::size_t j = 0; j < targets.cols(); ++j) {
        for (std::size_t i = rr.pivots.size(); i < gens_.rows(); ++i)
          if (!is_zero(tb.at(i, j))) return std::nullopt;
        for (std::size_t i = 0; i < rr.pivots.size(); ++i) x.at(rr.pivots[i], j) = tb.at(i, j);
      }
      return x;
    } else if constexpr (RingTraits<R>::is_polynomial) {
      return gb_->lift(targets);
    } else {
      const auto& e = *ech_;
      Matrix<R> y(gens_.cols(), targets.cols());
      for (std::size_t j = 0; j < targets.cols(); ++j) {
        std::vector<R> b = targets.column(j);
        for (const auto& [pr, pc] : e.pivots) {
          if (is_zero(b[pr])) continue;
          auto [q, rem] = EuclideanOps<R>::divmod(b[pr], e.h.at(pr, pc));
          if (!is_zero(rem)) return std::nullopt;
          y.at(pc, j) = q;
          for (std::size_t i = 0; i < gens_.rows(); ++i) b[i] = b[i] - q * e.h.at(i, pc);
        }
        for (const auto& v : b)
          if (!is_zero(v)) return std::nullopt;
      }
      return e.u * y;
    }
  }

  bool contains_all(const Matrix<R>& targets) const { return lift(targets).has_value(); }

  // Columns generate {x : gens * x = 0}.
  Matrix<R> kernel() const {
    if constexpr (RingTraits<R>::is_field) {
      const auto& rr = *rr_;
      std::vector<std::size_t> free_cols;
      std::size_t pi = 0;
      for (std::size_t c = 0; c < gens_.cols(); ++c) {
        if (pi < rr.pivots.size() && rr.pivots[pi] == c) {
          ++pi;
        } else {
          free_cols.push_back(c);
        }
      }
      Matrix<R> k(gens_.cols(), free_cols.size());
      for (std::size_t j = 0; j < free_cols.size(); ++j) {
        k.at(free_cols[j], j) = R(1);
        for (std::size_t i = 0; i < rr.pivots.size(); ++i)
          k.at(rr.pivots[i], j) = R(0) - rr.r.at(i, free_cols[j]);
      }
      return k;
    } else if constexpr (RingTraits<R>::is_polynomial) {
      return gb_->kernel();
    } else {
      const auto& e = *ech_;
      std::size_t rank = e.pivots.size();
      std::vector<std::size_t> zero_cols;
      for (std::size_t j = rank; j < gens_.cols(); ++j) zero_cols.push_back(j);
      Matrix<R> k(gens_.cols(), zero_cols.size());
      for (std::size_t j = 0; j < zero_cols.size(); ++j)
        for (std::size_t i = 0; i < gens_.cols(); ++i) k.at(i, j) = e.u.at(i, zero_cols[j]);
      return k;
    }
  }

private:
  Matrix<R> gens_;
  std::optional<RrefResult<R>> rr_;
  std::optional<ModuleBasis<typename std::conditional_t<
      RingTraits<R>::is_polynomial, poly_scalar<R>, poly_scalar<Poly<Rat>>>::type>>
      gb_;
  std::optional<EchelonResult<R>> ech_;
};

}  // namespace koszulkit
