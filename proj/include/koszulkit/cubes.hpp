#pragma once

// S-cubes of presented modules: vertices indexed by subsets of an ordered
// direction set, boundaries lowering one direction, functoriality squares
// commuting modulo the target presentation.  Subsets are bitmasks over the
// stored label order; that order also fixes the Koszul signs in totalize.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "koszulkit/complexes.hpp"
#include "koszulkit/fpmodules.hpp"
#include "koszulkit/matrix.hpp"
#include "koszulkit/ring.hpp"

namespace koszulkit {

class DirectionSet {
public:
  DirectionSet() = default;
  explicit DirectionSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j])
          throw std::invalid_argument("direction set: duplicate label " + labels_[i]);
    if (labels_.size() >= 16) throw std::invalid_argument("direction set: too many directions");
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> find(const std::string& l) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == l) return i;
    return std::nullopt;
  }
  std::size_t index_of(const std::string& l) const {
    auto i = find(l);
    if (!i) throw std::invalid_argument("direction set: unknown label " + l);
    return *i;
  }
  DirectionSet without(std::size_t pos) const {
    std::vector<std::string> ls;
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (i != pos) ls.push_back(labels_[i]);
    return DirectionSet(std::move(ls));
  }
  friend bool operator==(const DirectionSet& a, const DirectionSet& b) {
    return a.labels_ == b.labels_;
  }
  friend bool operator!=(const DirectionSet& a, const DirectionSet& b) { return !(a == b); }

private:
  std::vector<std::string> labels_;
};

using Mask = std::uint32_t;

inline int mask_popcount(Mask m) { return std::popcount(m); }

// Position of bit `pos` among the set bits of m, counting from 1 upward.
inline int mask_bit_index(Mask m, std::size_t pos) {
  return std::popcount(m & ((Mask(1) << pos) - 1)) + 1;
}

// Splice a zero bit at `pos` (inverse of deleting a coordinate).
inline Mask mask_insert_bit(Mask m, std::size_t pos) {
  Mask low = m & ((Mask(1) << pos) - 1);
  Mask high = (m >> pos) << (pos + 1);
  return low | high;
}

template <class R>
class Cube {
public:
  Cube() : dirs_(), verts_(1), bnds_(1) {}

  // vfn(mask) -> PresentedModule, bfn(mask, pos) -> boundary matrix for the
  // map x_T -> x_{T minus pos}, queried for each set bit of each mask.
  template <class VFn, class BFn>
  Cube(const RingCtx<R>& ctx, DirectionSet dirs, VFn&& vfn, BFn&& bfn, bool validate = true)
      : dirs_(std::move(dirs)) {
    std::size_t n = dirs_.size();
    Mask total = Mask(1) << n;
    verts_.reserve(total);
    for (Mask m = 0; m < total; ++m) verts_.push_back(vfn(m));
    bnds_.resize(total);
    for (Mask m = 1; m < total; ++m)
      for (std::size_t pos = 0; pos < n; ++pos) {
        if (!(m & (Mask(1) << pos))) continue;
        Matrix<R> b = bfn(m, pos);
        Mask tgt = m & ~(Mask(1) << pos);
        if (b.rows() != verts_[tgt].gens() || b.cols() != verts_[m].gens())
          throw std::invalid_argument("cube: boundary shape mismatch");
        bnds_[m].push_back(std::move(b));
      }
    if (validate) check_functorial(ctx);
  }

  const DirectionSet& dirs() const { return dirs_; }
  std::size_t nverts() const { return verts_.size(); }
  const PresentedModule<R>& vertex(Mask m) const { return verts_.at(m); }

  const Matrix<R>& boundary_matrix(Mask m, std::size_t pos) const {
    if (!(m & (Mask(1) << pos))) throw std::invalid_argument("cube: direction not in subset");
    return bnds_.at(m).at((std::size_t)(mask_bit_index(m, pos) - 1));
  }
  FpMap<R> boundary(Mask m, std::size_t pos) const {
    return FpMap<R>(verts_.at(m), verts_.at(m & ~(Mask(1) << pos)), boundary_matrix(m, pos));
  }

  bool is_free() const {
    for (const auto& v : verts_)
      if (v.rel.cols() != 0) return false;
    return true;
  }

  friend bool operator==(const Cube& a, const Cube& b) {
    if (!(a.dirs_ == b.dirs_)) return false;
    for (Mask m = 0; m < a.verts_.size(); ++m)
      if (!(a.verts_[m].rel == b.verts_[m].rel)) return false;
    for (Mask m = 0; m < a.bnds_.size(); ++m)
      if (!(a.bnds_[m] == b.bnds_[m])) return false;
    return true;
  }

  void check_functorial(const RingCtx<R>& ctx) const {
    std::size_t n = dirs_.size();
    for (Mask m = 0; m < (Mask(1) << n); ++m) {
      if (mask_popcount(m) < 2) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (!(m & (Mask(1) << k))) continue;
        for (std::size_t l = k + 1; l < n; ++l) {
          if (!(m & (Mask(1) << l))) continue;
          Mask mk = m & ~(Mask(1) << k), ml = m & ~(Mask(1) << l);
          Matrix<R> a = boundary_matrix(mk, l) * boundary_matrix(m, k);
          Matrix<R> b = boundary_matrix(ml, k) * boundary_matrix(m, l);
          const PresentedModule<R>& cod = verts_[m & ~(Mask(1) << k) & ~(Mask(1) << l)];
          if (cod.rel.cols() == 0) {
            if (!(a == b))
              throw std::invalid_argument("cube: functoriality fails on subset " +
                                          subset_name(m) + " directions " + dirs_.label(k) +
                                          "," + dirs_.label(l));
          } else if (!fpmap_is_zero(ctx, FpMap<R>(verts_[m], cod, a - b))) {
            throw std::invalid_argument("cube: functoriality fails modulo relations on subset " +
                                        subset_name(m));
          }
        }
      }
    }
  }

  std::string subset_name(Mask m) const {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < dirs_.size(); ++i)
      if (m & (Mask(1) << i)) {
        if (!first) s += ",";
        s += dirs_.label(i);
        first = false;
      }
    return s + "}";
  }

private:
  DirectionSet dirs_;
  std::vector<PresentedModule<R>> verts_;
  std::vector<std::vector<Matrix<R>>> bnds_;
};

template <class R>
Cube<R> zero_cube(const RingCtx<R>& ctx, const DirectionSet& dirs) {
  return Cube<R>(ctx, dirs, [](Mask) { return PresentedModule<R>(); },
                 [](Mask, std::size_t) { return Matrix<R>(0, 0); }, false);
}

template <class R>
class CubeMap {
public:
  CubeMap() = default;
  template <class Fn>
  CubeMap(const RingCtx<R>& ctx, Cube<R> dom, Cube<R> cod, Fn&& fn, bool validate = true)
      : dom_(std::move(dom)), cod_(std::move(cod)) {
    if (!(dom_.dirs() == cod_.dirs()))
      throw std::invalid_argument("cube map: direction sets differ");
    for (Mask m = 0; m < dom_.nverts(); ++m) {
      Matrix<R> f = fn(m);
      if (f.rows() != cod_.vertex(m).gens() || f.cols() != dom_.vertex(m).gens())
        throw std::invalid_argument("cube map: component shape mismatch");
      comps_.push_back(std::move(f));
    }
    if (validate) check_natural(ctx);
  }

  static CubeMap identity(const RingCtx<R>& ctx, const Cube<R>& x) {
    return CubeMap(ctx, x, x,
                   [&](Mask m) { return Matrix<R>::identity(x.vertex(m).gens()); }, false);
  }

  const Cube<R>& dom() const { return dom_; }
  const Cube<R>& cod() const { return cod_; }
  const Matrix<R>& comp(Mask m) const { return comps_.at(m); }
  FpMap<R> vertex_map(Mask m) const { return FpMap<R>(dom_.vertex(m), cod_.vertex(m), comps_[m]); }

  void check_natural(const RingCtx<R>& ctx) const {
    std::size_t n = dom_.dirs().size();
    for (Mask m = 1; m < dom_.nverts(); ++m)
      for (std::size_t k = 0; k < n; ++k) {
        if (!(m & (Mask(1) << k))) continue;
        Mask tgt = m & ~(Mask(1) << k);
        Matrix<R> a = comps_[tgt] * dom_.boundary_matrix(m, k);
        Matrix<R> b = cod_.boundary_matrix(m, k) * comps_[m];
        const PresentedModule<R>& cod = cod_.vertex(tgt);
        if (cod.rel.cols() == 0) {
          if (!(a == b))
            throw std::invalid_argument("cube map: naturality fails on subset " +
                                        dom_.subset_name(m) + " direction " +
                                        dom_.dirs().label(k));
        } else if (!fpmap_is_zero(ctx, FpMap<R>(dom_.vertex(m), cod, a - b))) {
          throw std::invalid_argument("cube map: naturality fails modulo relations on subset " +
                                      dom_.subset_name(m));
        }
      }
  }

private:
  Cube<R> dom_, cod_;
  std::vector<Matrix<R>> comps_;
};

template <class R>
CubeMap<R> cube_compose(const RingCtx<R>& ctx, const CubeMap<R>& g, const CubeMap<R>& f) {
  if (!(f.cod() == g.dom())) throw std::invalid_argument("cube map compose: middle cubes differ");
  return CubeMap<R>(ctx, f.dom(), g.cod(), [&](Mask m) { return g.comp(m) * f.comp(m); }, false);
}

template <class R>
bool fpmap_is_injective(const RingCtx<R>& ctx, const FpMap<R>& f) {
  if (f.dom.rel.cols() == 0 && f.cod.rel.cols() == 0) return is_injective(ctx, f.f);
  SubmoduleGens<R> ker = kernel_fpmap(ctx, f);
  if (ker.gens.cols() == 0) return true;
  return span_contains(ctx, f.dom.rel, ker.gens);
}

template <class R>
bool is_monic(const RingCtx<R>& ctx, const Cube<R>& x) {
  std::size_t n = x.dirs().size();
  for (Mask m = 1; m < x.nverts(); ++m)
    for (std::size_t k = 0; k < n; ++k) {
      if (!(m & (Mask(1) << k))) continue;
      if (!fpmap_is_injective(ctx, x.boundary(m, k))) return false;
    }
  return true;
}

// k-direction zeroth homology: vertices coker(d^k_{T + k}), boundaries the
// induced ones (well-definedness asserted).
template <class R>
Cube<R> h0_direction(const RingCtx<R>& ctx, const Cube<R>& x, std::size_t pos) {
  if (pos >= x.dirs().size()) throw std::invalid_argument("h0_direction: no such direction");
  DirectionSet nd = x.dirs().without(pos);
  std::vector<PresentedModule<R>> verts;
  Mask total = Mask(1) << nd.size();
  for (Mask m = 0; m < total; ++m) {
    Mask t = mask_insert_bit(m, pos);
    verts.push_back(cokernel_fpmap(x.boundary(t | (Mask(1) << pos), pos)));
  }
  Cube<R> out(
      ctx, nd, [&](Mask m) { return verts[m]; },
      [&](Mask m, std::size_t q) {
        Mask t = mask_insert_bit(m, pos);
        std::size_t old_q = q < pos ? q : q + 1;
        return x.boundary_matrix(t, old_q);
      });
  // induced boundaries must be well defined on the cokernels
  for (Mask m = 1; m < total; ++m)
    for (std::size_t q = 0; q < nd.size(); ++q) {
      if (!(m & (Mask(1) << q))) continue;
      if (!fpmap_well_defined(ctx, out.boundary(m, q)))
        throw std::logic_error("h0_direction: induced boundary is not well defined");
    }
  return out;
}

template <class R>
CubeMap<R> h0_direction_map(const RingCtx<R>& ctx, const CubeMap<R>& f, std::size_t pos) {
  Cube<R> nd = h0_direction(ctx, f.dom(), pos);
  Cube<R> nc = h0_direction(ctx, f.cod(), pos);
  CubeMap<R> out(ctx, nd, nc,
                 [&](Mask m) { return f.comp(mask_insert_bit(m, pos)); });
  for (Mask m = 0; m < nd.nverts(); ++m)
    if (!fpmap_well_defined(ctx, out.vertex_map(m)))
      throw std::logic_error("h0_direction_map: induced map is not well defined");
  return out;
}

template <class R>
bool is_admissible(const RingCtx<R>& ctx, const Cube<R>& x) {
  if (x.dirs().size() == 0) return true;
  if (!is_monic(ctx, x)) return false;
  for (std::size_t k = 0; k < x.dirs().size(); ++k)
    if (!is_admissible(ctx, h0_direction(ctx, x, k))) return false;
  return true;
}

// Iterated H0 over the labels of `which` (a mask on x's directions), applied
// in the stored direction order.  Assumes admissibility; for non-admissible
// cubes the answer depends on the order and no warning is raised here.
template <class R>
Cube<R> h0_iterated(const RingCtx<R>& ctx, const Cube<R>& x, Mask which) {
  Cube<R> cur = x;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < x.dirs().size(); ++i)
    if (which & (Mask(1) << i)) labels.push_back(x.dirs().label(i));
  for (const auto& l : labels) cur = h0_direction(ctx, cur, cur.dirs().index_of(l));
  return cur;
}

template <class R>
CubeMap<R> h0_iterated_map(const RingCtx<R>& ctx, const CubeMap<R>& f, Mask which) {
  CubeMap<R> cur = f;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < f.dom().dirs().size(); ++i)
    if (which & (Mask(1) << i)) labels.push_back(f.dom().dirs().label(i));
  for (const auto& l : labels) cur = h0_direction_map(ctx, cur, cur.dom().dirs().index_of(l));
  return cur;
}

inline Mask full_mask(std::size_t n) { return (Mask(1) << n) - 1; }

// Total complex of a cube of frees: degree n is the direct sum of the x_T
// with #T = n (increasing mask order); the component leaving x_T along its
// j-th direction (in stored order, 1-based) carries the sign (-1)^(j-1).
template <class R>
ChainComplex<R> totalize(const Cube<R>& x) {
  if (!x.is_free()) throw std::invalid_argument("totalize: cube has non-free vertices");
  std::size_t n = x.dirs().size();
  std::vector<std::vector<Mask>> layer(n + 1);
  for (Mask m = 0; m < (Mask(1) << n); ++m) layer[(std::size_t)mask_popcount(m)].push_back(m);
  std::vector<std::size_t> ranks(n + 1, 0);
  std::vector<std::vector<std::size_t>> offset(n + 1);
  for (std::size_t d = 0; d <= n; ++d)
    for (Mask m : layer[d]) {
      offset[d].push_back(ranks[d]);
      ranks[d] += x.vertex(m).gens();
    }
  std::vector<Matrix<R>> diffs;
  for (std::size_t d = 1; d <= n; ++d) {
    Matrix<R> dm(ranks[d - 1], ranks[d]);
    for (std::size_t ci = 0; ci < layer[d].size(); ++ci) {
      Mask m = layer[d][ci];
      for (std::size_t k = 0; k < n; ++k) {
        if (!(m & (Mask(1) << k))) continue;
        Mask tgt = m & ~(Mask(1) << k);
        std::size_t ri = 0;
        while (layer[d - 1][ri] != tgt) ++ri;
        const Matrix<R>& b = x.boundary_matrix(m, k);
        bool flip = mask_bit_index(m, k) % 2 == 0;
        for (std::size_t i = 0; i < b.rows(); ++i)
          for (std::size_t j = 0; j < b.cols(); ++j) {
            if (Matrix<R>::is_zero_entry(b.at(i, j))) continue;
            R v = b.at(i, j);
            if (flip) v = R(0) - v;
            dm.at(offset[d - 1][ri] + i, offset[d][ci] + j) = v;
          }
      }
    }
    diffs.push_back(std::move(dm));
  }
  return ChainComplex<R>(0, std::move(ranks), std::move(diffs));
}

struct TotisomReport {
  bool admissible = false;
  std::vector<std::pair<long, bool>> higher_vanishing;  // degree, H_p == 0
  bool h0_iso = false;
  bool pass = false;
};

// H_p(Tot x) vanishes away from 0 and the canonical generator-correspondence
// map H_0(Tot x) -> H_0^S(x) is an isomorphism.  Both presentations share the
// generating set of x at the empty subset, so the comparison map is the
// identity matrix.
template <class R>
TotisomReport verify_totisom(const RingCtx<R>& ctx, const Cube<R>& x) {
  TotisomReport rep;
  rep.admissible = is_admissible(ctx, x);
  if (!rep.admissible) throw std::invalid_argument("verify_totisom: cube is not admissible");
  ChainComplex<R> tot = totalize(x);
  bool all = true;
  for (long p = std::min(tot.lo(), 0L); p <= tot.hi(); ++p) {
    if (p == 0) continue;
    bool z = is_zero_module(ctx, homology(ctx, tot, p));
    rep.higher_vanishing.push_back({p, z});
    all = all && z;
  }
  PresentedModule<R> h0_tot = homology(ctx, tot, 0);
  PresentedModule<R> h0_cube = h0_iterated(ctx, x, full_mask(x.dirs().size())).vertex(0);
  if (h0_tot.gens() != h0_cube.gens())
    throw std::logic_error("verify_totisom: generator sets fail to correspond");
  rep.h0_iso =
      is_isomorphism(ctx, FpMap<R>(h0_tot, h0_cube, Matrix<R>::identity(h0_tot.gens())));
  rep.pass = all && rep.h0_iso;
  return rep;
}

// --- extension / restriction / homology functors ------------------------------
//
// ext adds directions with identity edges (new labels appended after the
// stored order, matching iterated one-direction extension); res takes the
// j-face; h takes iterated cokernels.  res after ext is the identity on the
// nose.

template <class R>
Cube<R> ext_functor(const RingCtx<R>& ctx, const Cube<R>& x, const std::vector<std::string>& w) {
  if (w.empty()) return x;
  for (const auto& l : w)
    if (x.dirs().find(l)) throw std::invalid_argument("ext_functor: label already present: " + l);
  std::vector<std::string> labels = x.dirs().labels();
  labels.insert(labels.end(), w.begin(), w.end());
  DirectionSet nd(labels);
  std::size_t base = x.dirs().size();
  Mask base_mask = full_mask(base);
  return Cube<R>(
      ctx, nd, [&](Mask m) { return x.vertex(m & base_mask); },
      [&](Mask m, std::size_t pos) {
        if (pos >= base) return Matrix<R>::identity(x.vertex(m & base_mask).gens());
        return x.boundary_matrix(m & base_mask, pos);
      });
}

template <class R>
Cube<R> res_functor(const RingCtx<R>& ctx, const Cube<R>& x, const std::vector<std::string>& w,
                    int j) {
  if (j != 0 && j != 1) throw std::invalid_argument("res_functor: face index must be 0 or 1");
  if (w.empty()) return x;
  Mask wm = 0;
  for (const auto& l : w) wm |= Mask(1) << x.dirs().index_of(l);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < x.dirs().size(); ++i)
    if (!(wm & (Mask(1) << i))) labels.push_back(x.dirs().label(i));
  DirectionSet nd(labels);
  auto lift_mask = [&](Mask m) {  // embed a subset of the kept directions
    Mask out = j == 1 ? wm : 0;
    std::size_t q = 0;
    for (std::size_t i = 0; i < x.dirs().size(); ++i) {
      if (wm & (Mask(1) << i)) continue;
      if (m & (Mask(1) << q)) out |= Mask(1) << i;
      ++q;
    }
    return out;
  };
  auto lift_pos = [&](std::size_t pos) {
    std::size_t q = 0;
    for (std::size_t i = 0; i < x.dirs().size(); ++i) {
      if (wm & (Mask(1) << i)) continue;
      if (q == pos) return i;
      ++q;
    }
    throw std::logic_error("res_functor: position out of range");
  };
  return Cube<R>(
      ctx, nd, [&](Mask m) { return x.vertex(lift_mask(m)); },
      [&](Mask m, std::size_t pos) { return x.boundary_matrix(lift_mask(m), lift_pos(pos)); });
}

template <class R>
Cube<R> h_functor(const RingCtx<R>& ctx, const Cube<R>& x, const std::vector<std::string>& w) {
  Mask wm = 0;
  for (const auto& l : w) wm |= Mask(1) << x.dirs().index_of(l);
  return h0_iterated(ctx, x, wm);
}

}  // namespace koszulkit
