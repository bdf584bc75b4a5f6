#pragma once

// Bounded chain complexes of free modules, with the full cone/cylinder
// calculus.  Differentials lower degree by one: d_n : X_n -> X_{n-1}, and
// d[k] picks up the sign (-1)^k.  Support is trimmed on construction so equal
// complexes compare memberwise.
//
// Good truncation needs kernels and images, which are not free; it returns a
// complex of presented modules (FpComplex).  The naive placement of the
// kernel above the cut breaks the homology contract H_n(trunc) = H_n(x) on
// the kept side, so the truncations here keep the image (with its inclusion)
// below the cut and the kernel (receiving the corestricted differential)
// above it, which makes the contract hold degreewise on the nose.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "koszulkit/fpmodules.hpp"
#include "koszulkit/matrix.hpp"
#include "koszulkit/ring.hpp"
#include "koszulkit/solver.hpp"

namespace koszulkit {

template <class R>
Matrix<R> kron(const Matrix<R>& a, const Matrix<R>& b) {
  Matrix<R> r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (Matrix<R>::is_zero_entry(a.at(i, j))) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          r.at(i * b.rows() + p, j * b.cols() + q) = a.at(i, j) * b.at(p, q);
    }
  return r;
}

template <class R>
Matrix<R> block2(const Matrix<R>& a, const Matrix<R>& b, const Matrix<R>& c, const Matrix<R>& d) {
  return Matrix<R>::vstack(Matrix<R>::hstack(a, b), Matrix<R>::hstack(c, d));
}

template <class R>
class ChainComplex {
public:
  ChainComplex() : lo_(0) {}
  ChainComplex(long lo, std::vector<std::size_t> ranks, std::vector<Matrix<R>> diffs)
      : lo_(lo), ranks_(std::move(ranks)), diffs_(std::move(diffs)) {
    if (diffs_.size() + 1 != ranks_.size() && !(ranks_.empty() && diffs_.empty()))
      throw std::invalid_argument("complex: differential count must be rank count minus one");
    for (std::size_t i = 0; i < diffs_.size(); ++i)
      if (diffs_[i].rows() != ranks_[i] || diffs_[i].cols() != ranks_[i + 1])
        throw std::invalid_argument("complex: differential shape mismatch at degree " +
                                    std::to_string(lo_ + (long)i + 1));
    for (std::size_t i = 0; i + 1 < diffs_.size(); ++i)
      if (!(diffs_[i] * diffs_[i + 1]).is_zero())
        throw std::invalid_argument("complex: d*d is nonzero at degree " +
                                    std::to_string(lo_ + (long)i + 2));
    trim();
  }

  long lo() const { return lo_; }
  long hi() const { return lo_ + (long)ranks_.size() - 1; }
  bool is_empty() const { return ranks_.empty(); }

  std::size_t rank(long n) const {
    if (n < lo_ || n > hi()) return 0;
    return ranks_[(std::size_t)(n - lo_)];
  }
  Matrix<R> diff(long n) const {  // d_n : X_n -> X_{n-1}
    if (n <= lo_ || n > hi()) return Matrix<R>(rank(n - 1), rank(n));
    return diffs_[(std::size_t)(n - lo_ - 1)];
  }

  friend bool operator==(const ChainComplex& a, const ChainComplex& b) {
    return a.lo_ == b.lo_ && a.ranks_ == b.ranks_ && a.diffs_ == b.diffs_;
  }
  friend bool operator!=(const ChainComplex& a, const ChainComplex& b) { return !(a == b); }

  long total_rank() const {
    long s = 0;
    for (auto r : ranks_) s += (long)r;
    return s;
  }

private:
  void trim() {
    while (!ranks_.empty() && ranks_.back() == 0) {
      ranks_.pop_back();
      if (!diffs_.empty()) diffs_.pop_back();
    }
    while (!ranks_.empty() && ranks_.front() == 0) {
      ranks_.erase(ranks_.begin());
      if (!diffs_.empty()) diffs_.erase(diffs_.begin());
      ++lo_;
    }
    if (ranks_.empty()) lo_ = 0;
  }

  long lo_;
  std::vector<std::size_t> ranks_;
  std::vector<Matrix<R>> diffs_;
};

template <class R>
class ChainMap {
public:
  ChainMap() = default;

  // fn(n) must give a cod.rank(n) x dom.rank(n) matrix; queried on the overlap.
  template <class Fn>
  ChainMap(ChainComplex<R> dom, ChainComplex<R> cod, Fn&& fn, bool validate = true)
      : dom_(std::move(dom)), cod_(std::move(cod)) {
    start_ = std::max(dom_.lo(), cod_.lo());
    long stop = std::min(dom_.hi(), cod_.hi());
    for (long n = start_; n <= stop; ++n) {
      Matrix<R> m = fn(n);
      if (m.rows() != cod_.rank(n) || m.cols() != dom_.rank(n))
        throw std::invalid_argument("chain map: component shape mismatch at degree " +
                                    std::to_string(n));
      comps_.push_back(std::move(m));
    }
    if (validate) check_chain();
  }

  static ChainMap zero(const ChainComplex<R>& dom, const ChainComplex<R>& cod) {
    return ChainMap(dom, cod,
                    [&](long n) { return Matrix<R>(cod.rank(n), dom.rank(n)); }, false);
  }
  static ChainMap identity(const ChainComplex<R>& x) {
    return ChainMap(x, x, [&](long n) { return Matrix<R>::identity(x.rank(n)); }, false);
  }

  const ChainComplex<R>& dom() const { return dom_; }
  const ChainComplex<R>& cod() const { return cod_; }

  Matrix<R> comp(long n) const {
    long idx = n - start_;
    if (idx < 0 || (std::size_t)idx >= comps_.size()) return Matrix<R>(cod_.rank(n), dom_.rank(n));
    return comps_[(std::size_t)idx];
  }

  friend ChainMap operator+(const ChainMap& a, const ChainMap& b) {
    a.require_parallel(b);
    return ChainMap(a.dom_, a.cod_, [&](long n) { return a.comp(n) + b.comp(n); }, false);
  }
  friend ChainMap operator-(const ChainMap& a, const ChainMap& b) {
    a.require_parallel(b);
    return ChainMap(a.dom_, a.cod_, [&](long n) { return a.comp(n) - b.comp(n); }, false);
  }
  friend bool operator==(const ChainMap& a, const ChainMap& b) {
    if (!(a.dom_ == b.dom_) || !(a.cod_ == b.cod_)) return false;
    long lo = std::min(a.dom_.lo(), a.cod_.lo());
    long hi = std::max(a.dom_.hi(), a.cod_.hi());
    for (long n = lo; n <= hi; ++n)
      if (!(a.comp(n) == b.comp(n))) return false;
    return true;
  }
  bool is_zero() const {
    for (const auto& m : comps_)
      if (!m.is_zero()) return false;
    return true;
  }

  void check_chain() const {
    long lo = std::min(dom_.lo(), cod_.lo());
    long hi = std::max(dom_.hi(), cod_.hi()) + 1;
    for (long n = lo; n <= hi; ++n)
      if (!(comp(n - 1) * dom_.diff(n) == cod_.diff(n) * comp(n)))
        throw std::invalid_argument("chain map: does not commute with the differential at degree " +
                                    std::to_string(n));
  }

private:
  void require_parallel(const ChainMap& o) const {
    if (!(dom_ == o.dom_) || !(cod_ == o.cod_))
      throw std::invalid_argument("chain map: mismatched domains or codomains");
  }

  ChainComplex<R> dom_, cod_;
  long start_ = 0;
  std::vector<Matrix<R>> comps_;
};

template <class R>
ChainMap<R> compose(const ChainMap<R>& g, const ChainMap<R>& f) {  // g after f
  if (!(f.cod() == g.dom())) throw std::invalid_argument("compose: middle complexes differ");
  return ChainMap<R>(f.dom(), g.cod(), [&](long n) { return g.comp(n) * f.comp(n); }, false);
}

// Degree-raising maps H_n : X_n -> Y_{n+1}.
template <class R>
class Homotopy {
public:
  Homotopy() = default;
  template <class Fn>
  Homotopy(ChainComplex<R> dom, ChainComplex<R> cod, Fn&& fn)
      : dom_(std::move(dom)), cod_(std::move(cod)) {
    start_ = dom_.lo();
    for (long n = start_; n <= dom_.hi(); ++n) {
      Matrix<R> m = fn(n);
      if (m.rows() != cod_.rank(n + 1) || m.cols() != dom_.rank(n))
        throw std::invalid_argument("homotopy: component shape mismatch at degree " +
                                    std::to_string(n));
      comps_.push_back(std::move(m));
    }
  }

  const ChainComplex<R>& dom() const { return dom_; }
  const ChainComplex<R>& cod() const { return cod_; }
  Matrix<R> comp(long n) const {
    long idx = n - start_;
    if (idx < 0 || (std::size_t)idx >= comps_.size())
      return Matrix<R>(cod_.rank(n + 1), dom_.rank(n));
    return comps_[(std::size_t)idx];
  }

  // dH + Hd as a (not necessarily chain) degreewise map collection; the caller
  // compares against f - g.
  Matrix<R> boundary_expression(long n) const {
    return cod_.diff(n + 1) * comp(n) + comp(n - 1) * dom_.diff(n);
  }

private:
  ChainComplex<R> dom_, cod_;
  long start_ = 0;
  std::vector<Matrix<R>> comps_;
};

// H witnesses f ~ g, i.e. f - g = dH + Hd in every degree.
template <class R>
bool homotopy_witnesses(const Homotopy<R>& h, const ChainMap<R>& f, const ChainMap<R>& g) {
  if (!(f.dom() == h.dom()) || !(f.cod() == h.cod())) return false;
  if (!(g.dom() == h.dom()) || !(g.cod() == h.cod())) return false;
  long lo = std::min(f.dom().lo(), f.cod().lo()) - 1;
  long hi = std::max(f.dom().hi(), f.cod().hi()) + 1;
  for (long n = lo; n <= hi; ++n)
    if (!(f.comp(n) - g.comp(n) == h.boundary_expression(n))) return false;
  return true;
}

// --- basic constructions ----------------------------------------------------

template <class R>
ChainComplex<R> shift(const ChainComplex<R>& x, long k) {
  if (x.is_empty()) return x;
  std::vector<std::size_t> ranks;
  std::vector<Matrix<R>> diffs;
  for (long n = x.lo(); n <= x.hi(); ++n) ranks.push_back(x.rank(n));
  for (long n = x.lo() + 1; n <= x.hi(); ++n) {
    Matrix<R> d = x.diff(n);
    if (k % 2 != 0) d = -d;
    diffs.push_back(std::move(d));
  }
  return ChainComplex<R>(x.lo() - k, std::move(ranks), std::move(diffs));
}

template <class R>
ChainComplex<R> direct_sum(const ChainComplex<R>& x, const ChainComplex<R>& y) {
  long lo = std::min(x.is_empty() ? y.lo() : x.lo(), y.is_empty() ? x.lo() : y.lo());
  long hi = std::max(x.hi(), y.hi());
  if (x.is_empty() && y.is_empty()) return ChainComplex<R>();
  if (x.is_empty()) return y;
  if (y.is_empty()) return x;
  std::vector<std::size_t> ranks;
  std::vector<Matrix<R>> diffs;
  for (long n = lo; n <= hi; ++n) ranks.push_back(x.rank(n) + y.rank(n));
  for (long n = lo + 1; n <= hi; ++n)
    diffs.push_back(Matrix<R>::diag_blocks(x.diff(n), y.diff(n)));
  return ChainComplex<R>(lo, std::move(ranks), std::move(diffs));
}

template <class R>
ChainMap<R> sum_inclusion(const ChainComplex<R>& x, const ChainComplex<R>& y, int which) {
  ChainComplex<R> s = direct_sum(x, y);
  const ChainComplex<R>& part = which == 0 ? x : y;
  return ChainMap<R>(part, s,
                     [&](long n) {
                       Matrix<R> m(s.rank(n), part.rank(n));
                       std::size_t off = which == 0 ? 0 : x.rank(n);
                       for (std::size_t i = 0; i < part.rank(n); ++i) m.at(off + i, i) = R(1);
                       return m;
                     },
                     false);
}

template <class R>
ChainMap<R> sum_projection(const ChainComplex<R>& x, const ChainComplex<R>& y, int which) {
  ChainComplex<R> s = direct_sum(x, y);
  const ChainComplex<R>& part = which == 0 ? x : y;
  return ChainMap<R>(s, part,
                     [&](long n) {
                       Matrix<R> m(part.rank(n), s.rank(n));
                       std::size_t off = which == 0 ? 0 : x.rank(n);
                       for (std::size_t i = 0; i < part.rank(n); ++i) m.at(i, off + i) = R(1);
                       return m;
                     },
                     false);
}

enum class Side { at_least, at_most };

template <class R>
ChainComplex<R> truncate_brutal(const ChainComplex<R>& x, long k, Side side) {
  std::vector<std::size_t> ranks;
  std::vector<Matrix<R>> diffs;
  long lo = side == Side::at_least ? std::max(x.lo(), k) : x.lo();
  long hi = side == Side::at_least ? x.hi() : std::min(x.hi(), k);
  if (lo > hi) return ChainComplex<R>();
  for (long n = lo; n <= hi; ++n) ranks.push_back(x.rank(n));
  for (long n = lo + 1; n <= hi; ++n) diffs.push_back(x.diff(n));
  return ChainComplex<R>(lo, std::move(ranks), std::move(diffs));
}

// mapping cone: (Cone f)_n = x_{n-1} (+) y_n, d = [[-d^x, 0], [-f, d^y]]
template <class R>
ChainComplex<R> cone(const ChainMap<R>& f) {
  const ChainComplex<R>& x = f.dom();
  const ChainComplex<R>& y = f.cod();
  if (x.is_empty() && y.is_empty()) return ChainComplex<R>();
  long lo = std::min(x.lo() + 1, y.lo());
  long hi = std::max(x.hi() + 1, y.hi());
  std::vector<std::size_t> ranks;
  std::vector<Matrix<R>> diffs;
  for (long n = lo; n <= hi; ++n) ranks.push_back(x.rank(n - 1) + y.rank(n));
  for (long n = lo + 1; n <= hi; ++n)
    diffs.push_back(block2(-x.diff(n - 1), Matrix<R>(x.rank(n - 2), y.rank(n)),
                           -f.comp(n - 1), y.diff(n)));
  return ChainComplex<R>(lo, std::move(ranks), std::move(diffs));
}

template <class R>
ChainMap<R> cone_kappa(const ChainMap<R>& f) {  // y -> Cone f, (0, id)^t
  ChainComplex<R> c = cone(f);
  const ChainComplex<R>& x = f.dom();
  const ChainComplex<R>& y = f.cod();
  return ChainMap<R>(y, c,
                     [&](long n) {
                       Matrix<R> m(c.rank(n), y.rank(n));
                       for (std::size_t i = 0; i < y.rank(n); ++i) m.at(x.rank(n - 1) + i, i) = R(1);
                       return m;
                     });
}

template <class R>
ChainMap<R> cone_delta(const ChainMap<R>& f) {  // Cone f -> x[-? ] : projection to x shifted up
  ChainComplex<R> c = cone(f);
  ChainComplex<R> xs = shift(f.dom(), -1);  // x[-1]_n = x_{n-1}
  const ChainComplex<R>& x = f.dom();
  return ChainMap<R>(c, xs,
                     [&](long n) {
                       Matrix<R> m(xs.rank(n), c.rank(n));
                       for (std::size_t i = 0; i < x.rank(n - 1); ++i) m.at(i, i) = R(1);
                       return m;
                     });
}

// Cx = Cone(id_x) plus the structure maps iota: x -> Cx, r: CCx -> Cx,
// sigma: CCx -> CCx, satisfying r C(iota) = r iota_C = id, sigma C(iota) =
// iota_C, sigma sigma = id.
template <class R>
ChainMap<R> cone_functor_map(const ChainMap<R>& f) {  // C(f) : C(dom f) -> C(cod f)
  ChainComplex<R> cx = cone(ChainMap<R>::identity(f.dom()));
  ChainComplex<R> cy = cone(ChainMap<R>::identity(f.cod()));
  return ChainMap<R>(cx, cy, [&](long n) {
    return Matrix<R>::diag_blocks(f.comp(n - 1), f.comp(n));
  });
}

// Cone f -> Cone f' induced by a commuting square v f = f' u.
template <class R>
ChainMap<R> cone_square_map(const ChainMap<R>& f, const ChainMap<R>& fp, const ChainMap<R>& u,
                            const ChainMap<R>& v) {
  if (!(u.dom() == f.dom()) || !(u.cod() == fp.dom()) || !(v.dom() == f.cod()) ||
      !(v.cod() == fp.cod()))
    throw std::invalid_argument("cone_square_map: sides do not match the cones");
  if (!(compose(v, f) == compose(fp, u)))
    throw std::invalid_argument("cone_square_map: square does not commute");
  ChainComplex<R> cf = cone(f), cfp = cone(fp);
  return ChainMap<R>(cf, cfp, [&](long n) {
    return Matrix<R>::diag_blocks(u.comp(n - 1), v.comp(n));
  });
}

template <class R>
ChainMap<R> scale_map(const ChainMap<R>& f, const R& c) {
  return ChainMap<R>(f.dom(), f.cod(),
                     [&](long n) {
                       Matrix<R> m = f.comp(n);
                       for (std::size_t i = 0; i < m.rows(); ++i)
                         for (std::size_t j = 0; j < m.cols(); ++j) {
                           R v = m.at(i, j) * c;
                           m.at(i, j) = v;
                         }
                       return m;
                     },
                     false);
}

template <class R>
ChainMap<R> direct_sum_map(const ChainMap<R>& f, const ChainMap<R>& g) {
  return ChainMap<R>(direct_sum(f.dom(), g.dom()), direct_sum(f.cod(), g.cod()),
                     [&](long n) { return Matrix<R>::diag_blocks(f.comp(n), g.comp(n)); }, false);
}

template <class R>
struct BicomplicialData {
  ChainComplex<R> cx;   // Cone(id_x)
  ChainMap<R> iota;     // x -> Cx
  ChainMap<R> r;        // CCx -> Cx
  ChainMap<R> sigma;    // CCx -> CCx
};

template <class R>
ChainMap<R> bicomplicial_iota(const ChainComplex<R>& x) {
  return cone_kappa(ChainMap<R>::identity(x));
}

template <class R>
BicomplicialData<R> bicomplicial_C(const ChainComplex<R>& x) {
  BicomplicialData<R> out;
  ChainMap<R> idx = ChainMap<R>::identity(x);
  out.cx = cone(idx);
  out.iota = bicomplicial_iota(x);
  ChainComplex<R> ccx = cone(ChainMap<R>::identity(out.cx));
  // CCx_n = x_{n-2} (+) x_{n-1} (+) x_{n-1} (+) x_n
  auto blocks = [&](long n) {
    return std::array<std::size_t, 4>{x.rank(n - 2), x.rank(n - 1), x.rank(n - 1), x.rank(n)};
  };
  out.r = ChainMap<R>(ccx, out.cx, [&](long n) {
    auto b = blocks(n);
    Matrix<R> m(out.cx.rank(n), ccx.rank(n));
    // rows: x_{n-1} | x_n ; columns: the four blocks
    for (std::size_t i = 0; i < x.rank(n - 1); ++i) {
      m.at(i, b[0] + i) = R(1);
      m.at(i, b[0] + b[1] + i) = R(1);
    }
    for (std::size_t i = 0; i < x.rank(n); ++i)
      m.at(x.rank(n - 1) + i, b[0] + b[1] + b[2] + i) = R(1);
    return m;
  });
  out.sigma = ChainMap<R>(ccx, ccx, [&](long n) {
    auto b = blocks(n);
    Matrix<R> m(ccx.rank(n), ccx.rank(n));
    for (std::size_t i = 0; i < b[0]; ++i) m.at(i, i) = R(0) - R(1);
    for (std::size_t i = 0; i < b[1]; ++i) m.at(b[0] + i, b[0] + b[1] + i) = R(1);
    for (std::size_t i = 0; i < b[2]; ++i) m.at(b[0] + b[1] + i, b[0] + i) = R(1);
    for (std::size_t i = 0; i < b[3]; ++i)
      m.at(b[0] + b[1] + b[2] + i, b[0] + b[1] + b[2] + i) = R(1);
    return m;
  });
  return out;
}

// Cylinder of f: x -> y, taken as y (+) C(x) with the diagonal differential,
// which carries the same structure maps as the classical cylinder.
template <class R>
struct CylinderData {
  ChainComplex<R> cyl;
  ChainMap<R> j1;       // x -> Cyl, (f, -iota)^t; the cofibration
  ChainMap<R> j2;       // y -> Cyl, (id, 0)^t
  ChainMap<R> j3;       // Cx -> Cyl, (0, id)^t
  ChainMap<R> beta;     // Cyl -> y, (id, 0); beta j1 = f, beta j2 = id
  ChainMap<R> eta;      // Cyl -> Cone f, split epi
  ChainMap<R> split_s;  // Cone f -> Cyl with eta s = id
  ChainMap<R> split_t;  // Cyl -> x with t j1 = id
  Homotopy<R> beta_homotopy;  // id - j2 beta = dH + Hd
};

template <class R>
CylinderData<R> cylinder(const ChainMap<R>& f) {
  const ChainComplex<R>& x = f.dom();
  const ChainComplex<R>& y = f.cod();
  CylinderData<R> out;
  ChainComplex<R> cx = cone(ChainMap<R>::identity(x));
  out.cyl = direct_sum(y, cx);
  ChainComplex<R> cf = cone(f);
  auto yr = [&](long n) { return y.rank(n); };
  auto xr = [&](long n) { return x.rank(n); };
  // Cyl_n = y_n (+) x_{n-1} (+) x_n ; Cone_n = x_{n-1} (+) y_n
  out.j1 = ChainMap<R>(x, out.cyl, [&](long n) {
    Matrix<R> m(out.cyl.rank(n), xr(n));
    for (std::size_t i = 0; i < yr(n); ++i)
      for (std::size_t j = 0; j < xr(n); ++j) m.at(i, j) = f.comp(n).at(i, j);
    for (std::size_t i = 0; i < xr(n); ++i) m.at(yr(n) + xr(n - 1) + i, i) = R(0) - R(1);
    return m;
  });
  out.j2 = ChainMap<R>(y, out.cyl, [&](long n) {
    Matrix<R> m(out.cyl.rank(n), yr(n));
    for (std::size_t i = 0; i < yr(n); ++i) m.at(i, i) = R(1);
    return m;
  });
  out.j3 = ChainMap<R>(cx, out.cyl, [&](long n) {
    Matrix<R> m(out.cyl.rank(n), cx.rank(n));
    for (std::size_t i = 0; i < cx.rank(n); ++i) m.at(yr(n) + i, i) = R(1);
    return m;
  });
  out.beta = ChainMap<R>(out.cyl, y, [&](long n) {
    Matrix<R> m(yr(n), out.cyl.rank(n));
    for (std::size_t i = 0; i < yr(n); ++i) m.at(i, i) = R(1);
    return m;
  });
  // eta(v, (a, c)) = (a, v + f c)
  out.eta = ChainMap<R>(out.cyl, cf, [&](long n) {
    Matrix<R> m(cf.rank(n), out.cyl.rank(n));
    for (std::size_t i = 0; i < xr(n - 1); ++i) m.at(i, yr(n) + i) = R(1);
    for (std::size_t i = 0; i < yr(n); ++i) m.at(xr(n - 1) + i, i) = R(1);
    for (std::size_t i = 0; i < yr(n); ++i)
      for (std::size_t j = 0; j < xr(n); ++j)
        m.at(xr(n - 1) + i, yr(n) + xr(n - 1) + j) = f.comp(n).at(i, j);
    return m;
  });
  // s(a, b) = (b, (a, 0)) ; eta s = id
  out.split_s = ChainMap<R>(cf, out.cyl,
                            [&](long n) {
                              Matrix<R> m(out.cyl.rank(n), cf.rank(n));
                              for (std::size_t i = 0; i < yr(n); ++i) m.at(i, xr(n - 1) + i) = R(1);
                              for (std::size_t i = 0; i < xr(n - 1); ++i) m.at(yr(n) + i, i) = R(1);
                              return m;
                            },
                            false);
  // t(v, (a, c)) = -c ; t j1 = id
  out.split_t = ChainMap<R>(out.cyl, x,
                            [&](long n) {
                              Matrix<R> m(xr(n), out.cyl.rank(n));
                              for (std::size_t i = 0; i < xr(n); ++i)
                                m.at(i, yr(n) + xr(n - 1) + i) = R(0) - R(1);
                              return m;
                            },
                            false);
  // contraction of the C(x) summand: H(v, (a, c)) = (0, (-c, 0))
  out.beta_homotopy = Homotopy<R>(out.cyl, out.cyl, [&](long n) {
    Matrix<R> m(out.cyl.rank(n + 1), out.cyl.rank(n));
    for (std::size_t i = 0; i < xr(n); ++i)
      m.at(yr(n + 1) + i, yr(n) + xr(n - 1) + i) = R(0) - R(1);
    return m;
  });
  return out;
}

// --- homology and quasi-isomorphisms ----------------------------------------

template <class R>
FpMap<R> diff_as_fpmap(const ChainComplex<R>& x, long n) {
  return FpMap<R>(PresentedModule<R>::free_of_rank(x.rank(n)),
                  PresentedModule<R>::free_of_rank(x.rank(n - 1)), x.diff(n));
}

template <class R>
PresentedModule<R> homology(const RingCtx<R>& ctx, const ChainComplex<R>& x, long n) {
  return homology_pair(ctx, diff_as_fpmap(x, n + 1), diff_as_fpmap(x, n));
}

// H_n(f) on the presentations produced by homology(): generators are the
// kernel columns of d_n, so the induced matrix expresses f(cycle) in the
// codomain's kernel columns.
template <class R>
FpMap<R> homology_induced_map(const RingCtx<R>& ctx, const ChainMap<R>& f, long n) {
  PresentedModule<R> hx = homology(ctx, f.dom(), n);
  PresentedModule<R> hy = homology(ctx, f.cod(), n);
  Matrix<R> kx = kernel_matrix(ctx, f.dom().diff(n));
  Matrix<R> ky = kernel_matrix(ctx, f.cod().diff(n));
  auto lifted = LinSolver<R>(ctx, ky).lift(f.comp(n) * kx);
  if (!lifted) throw std::logic_error("homology_induced_map: cycles do not map to cycles");
  return FpMap<R>(hx, hy, *lifted);
}

// Exactness of the row at every degree: ker d_n lies in the column span of
// d_{n+1}.  For bounded complexes of frees this is equivalent to vanishing
// homology over the ring itself.
template <class R>
bool is_acyclic(const RingCtx<R>& ctx, const ChainComplex<R>& x) {
  for (long n = x.lo(); n <= x.hi(); ++n) {
    Matrix<R> ker = kernel_matrix(ctx, x.diff(n));
    if (ker.cols() == 0) continue;
    if (!span_contains(ctx, x.diff(n + 1), ker)) return false;
  }
  return true;
}

template <class R>
bool is_quasi_iso(const RingCtx<R>& ctx, const ChainMap<R>& f) {
  return is_acyclic(ctx, cone(f));
}

// Solve f = dH + Hd for H in one global exact linear system (Kronecker
// vectorization, column-major).
template <class R>
std::optional<Homotopy<R>> null_homotopy(const RingCtx<R>& ctx, const ChainMap<R>& f) {
  const ChainComplex<R>& x = f.dom();
  const ChainComplex<R>& y = f.cod();
  struct Block {
    long n;
    std::size_t offset, size;
  };
  std::vector<Block> vars;
  std::size_t total_vars = 0;
  for (long n = x.lo(); n <= x.hi(); ++n) {
    std::size_t sz = x.rank(n) * y.rank(n + 1);
    if (sz == 0) continue;
    vars.push_back({n, total_vars, sz});
    total_vars += sz;
  }
  std::vector<Block> eqs;
  std::size_t total_eqs = 0;
  long lo = std::min(x.lo(), y.lo());
  long hi = std::max(x.hi(), y.hi());
  for (long m = lo; m <= hi; ++m) {
    std::size_t sz = x.rank(m) * y.rank(m);
    if (sz == 0) continue;
    eqs.push_back({m, total_eqs, sz});
    total_eqs += sz;
  }
  Matrix<R> big(total_eqs, total_vars);
  Matrix<R> rhs(total_eqs, 1);
  auto paste = [&](std::size_t ro, std::size_t co, const Matrix<R>& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) big.at(ro + i, co + j) = m.at(i, j);
  };
  auto find_eq = [&](long m) -> const Block* {
    for (const auto& b : eqs)
      if (b.n == m) return &b;
    return nullptr;
  };
  for (const auto& v : vars) {
    if (const Block* e = find_eq(v.n))
      paste(e->offset, v.offset, kron(Matrix<R>::identity(x.rank(v.n)), y.diff(v.n + 1)));
    if (const Block* e = find_eq(v.n + 1))
      paste(e->offset, v.offset,
            kron(x.diff(v.n + 1).transposed(), Matrix<R>::identity(y.rank(v.n + 1))));
  }
  for (const auto& e : eqs) {
    Matrix<R> fm = f.comp(e.n);
    for (std::size_t j = 0; j < fm.cols(); ++j)
      for (std::size_t i = 0; i < fm.rows(); ++i)
        rhs.at(e.offset + j * fm.rows() + i, 0) = fm.at(i, j);
  }
  auto sol = LinSolver<R>(ctx, big).lift(rhs);
  if (!sol) return std::nullopt;
  Homotopy<R> h(x, y, [&](long n) {
    Matrix<R> m(y.rank(n + 1), x.rank(n));
    for (const auto& v : vars) {
      if (v.n != n) continue;
      for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
          m.at(i, j) = sol->at(v.offset + j * m.rows() + i, 0);
    }
    return m;
  });
  if (!homotopy_witnesses(h, f, ChainMap<R>::zero(x, y)))
    throw std::logic_error("null_homotopy: solver produced an invalid homotopy");
  return h;
}

// --- retraction splitting ----------------------------------------------------

// For a strict retraction p i = id_x, exhibits y as a direct summand:
// z = Cone i, phi: y -> x (+) z, gamma: x (+) z -> y with gamma phi = id_y
// exactly and phi gamma homotopic to the identity by an explicit homotopy.
template <class R>
struct RetractionSplit {
  ChainComplex<R> z;
  ChainComplex<R> sum;   // x (+) z
  ChainMap<R> phi;       // y -> x (+) z
  ChainMap<R> gamma;     // x (+) z -> y
  Homotopy<R> h;         // phi gamma - id = dH + Hd
};

template <class R>
RetractionSplit<R> retraction_splitting(const RingCtx<R>& ctx, const ChainMap<R>& i,
                                        const ChainMap<R>& p) {
  (void)ctx;
  const ChainComplex<R>& x = i.dom();
  const ChainComplex<R>& y = i.cod();
  if (!(p.dom() == y) || !(p.cod() == x))
    throw std::invalid_argument("retraction_splitting: p must run opposite to i");
  if (!(compose(p, i) == ChainMap<R>::identity(x)))
    throw std::invalid_argument("retraction_splitting: p after i is not the identity");
  RetractionSplit<R> out;
  out.z = cone(i);
  out.sum = direct_sum(x, out.z);
  auto xr = [&](long n) { return x.rank(n); };
  auto yr = [&](long n) { return y.rank(n); };
  // sum_n = x_n (+) x_{n-1} (+) y_n
  out.phi = ChainMap<R>(y, out.sum, [&](long n) {
    Matrix<R> m(out.sum.rank(n), yr(n));
    for (std::size_t a = 0; a < xr(n); ++a)
      for (std::size_t b = 0; b < yr(n); ++b) m.at(a, b) = p.comp(n).at(a, b);
    for (std::size_t b = 0; b < yr(n); ++b) m.at(xr(n) + xr(n - 1) + b, b) = R(1);
    return m;
  });
  out.gamma = ChainMap<R>(out.sum, y, [&](long n) {
    Matrix<R> m(yr(n), out.sum.rank(n));
    Matrix<R> ip = i.comp(n) * p.comp(n);
    for (std::size_t a = 0; a < yr(n); ++a) {
      for (std::size_t b = 0; b < xr(n); ++b) m.at(a, b) = i.comp(n).at(a, b);
      for (std::size_t b = 0; b < yr(n); ++b) {
        R v = a == b ? R(1) : R(0);
        m.at(a, xr(n) + xr(n - 1) + b) = v - ip.at(a, b);
      }
    }
    return m;
  });
  out.h = Homotopy<R>(out.sum, out.sum, [&](long n) {
    // H(v, (a, c)) = (0, (p c - v, 0))
    Matrix<R> m(out.sum.rank(n + 1), out.sum.rank(n));
    for (std::size_t b = 0; b < xr(n); ++b) m.at(xr(n + 1) + b, b) = R(0) - R(1);
    for (std::size_t a = 0; a < xr(n); ++a)
      for (std::size_t b = 0; b < yr(n); ++b)
        m.at(xr(n + 1) + a, xr(n) + xr(n - 1) + b) = p.comp(n).at(a, b);
    return m;
  });
  if (!(compose(out.gamma, out.phi) == ChainMap<R>::identity(y)))
    throw std::logic_error("retraction_splitting: gamma phi is not the identity");
  if (!homotopy_witnesses(out.h, compose(out.phi, out.gamma), ChainMap<R>::identity(out.sum)))
    throw std::logic_error("retraction_splitting: homotopy witness failed");
  return out;
}

template <class R>
long euler_characteristic(const ChainComplex<R>& x) {
  long s = 0;
  for (long n = x.lo(); n <= x.hi(); ++n)
    s += (n % 2 == 0 ? 1 : -1) * (long)x.rank(n);
  return s;
}

// --- complexes of presented modules (for good truncation) ---------------------

template <class R>
struct FpComplex {
  long lo = 0;
  std::vector<PresentedModule<R>> mods;           // degree lo upward
  std::vector<FpMap<R>> diffs;                    // diffs[i] : mods[i+1] -> mods[i]

  long hi() const { return lo + (long)mods.size() - 1; }
  const PresentedModule<R>& mod(long n) const {
    static const PresentedModule<R> zero{};
    if (n < lo || n > hi()) return zero;
    return mods[(std::size_t)(n - lo)];
  }
  FpMap<R> diff(long n) const {  // d_n : mod(n) -> mod(n-1)
    if (n <= lo || n > hi()) return FpMap<R>(mod(n), mod(n - 1), Matrix<R>(mod(n - 1).gens(), mod(n).gens()));
    return diffs[(std::size_t)(n - lo - 1)];
  }
};

template <class R>
PresentedModule<R> fp_homology(const RingCtx<R>& ctx, const FpComplex<R>& x, long n) {
  return homology_pair(ctx, x.diff(n + 1), x.diff(n));
}

template <class R>
FpComplex<R> as_fp_complex(const ChainComplex<R>& x) {
  FpComplex<R> out;
  out.lo = x.lo();
  for (long n = x.lo(); n <= x.hi(); ++n)
    out.mods.push_back(PresentedModule<R>::free_of_rank(x.rank(n)));
  for (long n = x.lo() + 1; n <= x.hi(); ++n)
    out.diffs.push_back(FpMap<R>(out.mods[(std::size_t)(n - x.lo())],
                                 out.mods[(std::size_t)(n - x.lo() - 1)], x.diff(n)));
  return out;
}

// Good truncation.  at_most k: degrees <= k unchanged; degree k+1 carries the
// image of d_{k+1} included into x_k.  at_least k+1 (pass k+1 as the cut):
// degrees >= k+2 unchanged; degree k+1 carries the kernel of d_{k+1}
// receiving the corestricted d_{k+2}.  Both keep homology on their side.
template <class R>
FpComplex<R> truncate_good(const RingCtx<R>& ctx, const ChainComplex<R>& x, long k, Side side) {
  FpComplex<R> out;
  if (side == Side::at_most) {
    if (k >= x.hi()) return as_fp_complex(x);
    out.lo = x.lo();
    if (k < x.lo()) return out;
    for (long n = x.lo(); n <= k; ++n)
      out.mods.push_back(PresentedModule<R>::free_of_rank(x.rank(n)));
    for (long n = x.lo() + 1; n <= k; ++n)
      out.diffs.push_back(FpMap<R>(out.mods[(std::size_t)(n - x.lo())],
                                   out.mods[(std::size_t)(n - x.lo() - 1)], x.diff(n)));
    // image of d_{k+1}: generators indexed by x_{k+1}, relations its syzygies
    Matrix<R> d = x.diff(k + 1);
    PresentedModule<R> img(kernel_matrix(ctx, d));
    out.mods.push_back(img);
    out.diffs.push_back(FpMap<R>(img, out.mods[(std::size_t)(k - x.lo())], d));
    return out;
  }
  // side == at_least, cutting at degree k: keep degrees >= k, kernel at k
  if (k <= x.lo()) return as_fp_complex(x);
  if (k > x.hi()) return out;
  out.lo = k;
  Matrix<R> k0 = kernel_matrix(ctx, x.diff(k));
  PresentedModule<R> kerm(kernel_matrix(ctx, k0));
  out.mods.push_back(kerm);
  for (long n = k + 1; n <= x.hi(); ++n)
    out.mods.push_back(PresentedModule<R>::free_of_rank(x.rank(n)));
  if (k + 1 <= x.hi()) {
    // corestrict d_{k+1} through the kernel generators
    auto lift = LinSolver<R>(ctx, k0).lift(x.diff(k + 1));
    if (!lift)
      throw std::logic_error("truncate_good: differential does not corestrict to the kernel");
    out.diffs.push_back(FpMap<R>(out.mods[1], out.mods[0], *lift));
  }
  for (long n = k + 2; n <= x.hi(); ++n)
    out.diffs.push_back(FpMap<R>(out.mods[(std::size_t)(n - k)],
                                 out.mods[(std::size_t)(n - k - 1)], x.diff(n)));
  return out;
}

}  // namespace koszulkit
