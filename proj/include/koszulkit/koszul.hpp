#pragma once

// Koszul cubes over a labeled regular sequence, membership in the multi
// semi-direct product categories M_A(f_U; f_V)(p), total quasi-isomorphisms,
// deterministic generators, and the quasi-split kernel witness.
//
// Coefficients are restricted to fields (Groebner territory); the direction
// label order of the regular sequence is the stored cube order throughout.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "koszulkit/cubes.hpp"
#include "koszulkit/fpmodules.hpp"
#include "koszulkit/groebner.hpp"
#include "koszulkit/rng.hpp"
#include "koszulkit/solver.hpp"

namespace koszulkit {

enum class Verdict { pass, fail, inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "inconclusive";
  }
}

inline Verdict verdict_and(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

template <class F>
class RegularSequence {
public:
  RegularSequence() = default;
  RegularSequence(const RingCtx<Poly<F>>& ring, std::vector<std::string> labels,
                  std::vector<Poly<F>> polys, bool validate = true)
      : labels_(std::move(labels)), polys_(std::move(polys)) {
    if (labels_.size() != polys_.size())
      throw std::invalid_argument("regular sequence: label and polynomial counts differ");
    DirectionSet check(labels_);  // distinctness
    (void)check;
    if (validate && !is_regular_sequence(polys_, ring.order))
      throw std::invalid_argument("regular sequence: sequence fails the regularity test");
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const Poly<F>& poly(std::size_t i) const { return polys_.at(i); }
  const std::vector<Poly<F>>& polys() const { return polys_; }
  DirectionSet directions() const { return DirectionSet(labels_); }

  const Poly<F>& poly_for(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return polys_[i];
    throw std::invalid_argument("regular sequence: unknown label " + label);
  }
  std::vector<Poly<F>> polys_for(const std::vector<std::string>& which) const {
    std::vector<Poly<F>> out;
    for (const auto& l : which) out.push_back(poly_for(l));
    return out;
  }

private:
  std::vector<std::string> labels_;
  std::vector<Poly<F>> polys_;
};

struct MMParams {
  std::vector<std::string> u, v;
  long p = 0;
};

template <class F>
void validate_mm_params(const MMParams& params, const RegularSequence<F>& fs) {
  if (params.p < 0) throw std::invalid_argument("mm params: p must be nonnegative");
  for (const auto& l : params.u) {
    fs.poly_for(l);
    for (const auto& m : params.v)
      if (l == m) throw std::invalid_argument("mm params: U and V overlap at " + l);
  }
  for (const auto& l : params.v) fs.poly_for(l);
}

struct KoszulCheck {
  Verdict verdict = Verdict::pass;
  std::string detail;
};

// A Koszul cube: every boundary injective and every boundary cokernel killed
// by a power of the matching sequence element.  When the power bound runs out
// the exact saturation test separates "no power works" (fail) from "a power
// exists beyond the bound" (inconclusive).
template <class F>
KoszulCheck is_koszul_cube(const RingCtx<Poly<F>>& ctx, const Cube<Poly<F>>& x,
                           const RegularSequence<F>& fs, unsigned bound = 16) {
  using P = Poly<F>;
  if (!x.is_free()) throw std::invalid_argument("is_koszul_cube: cube must have free vertices");
  for (const auto& l : x.dirs().labels()) fs.poly_for(l);
  KoszulCheck out;
  std::size_t n = x.dirs().size();
  for (Mask m = 1; m < x.nverts(); ++m)
    for (std::size_t k = 0; k < n; ++k) {
      if (!(m & (Mask(1) << k))) continue;
      FpMap<P> b = x.boundary(m, k);
      if (!fpmap_is_injective(ctx, b)) {
        out.verdict = Verdict::fail;
        out.detail = "boundary not injective at " + x.subset_name(m) + " direction " +
                     x.dirs().label(k);
        return out;
      }
      const P& f = fs.poly_for(x.dirs().label(k));
      PresentedModule<P> coker = cokernel_fpmap(b);
      if (power_annihilates(ctx, f, coker, bound)) continue;
      if (!supported_on(ctx, coker, {f})) {
        out.verdict = Verdict::fail;
        out.detail = "cokernel not a power-torsion module at " + x.subset_name(m) +
                     " direction " + x.dirs().label(k);
        return out;
      }
      out.verdict = Verdict::inconclusive;
      out.detail = "annihilating power exceeds bound at " + x.subset_name(m) + " direction " +
                   x.dirs().label(k);
    }
  return out;
}

// Rank-one cube with d^k = multiplication by f_k^(a_k) everywhere.
template <class F>
Cube<Poly<F>> typ_cube(const RingCtx<Poly<F>>& ctx, const RegularSequence<F>& fs,
                       const std::vector<unsigned>& exponents) {
  using P = Poly<F>;
  if (exponents.size() != fs.size())
    throw std::invalid_argument("typ_cube: exponent count must match the sequence");
  for (unsigned e : exponents)
    if (e == 0) throw std::invalid_argument("typ_cube: exponents must be positive");
  std::vector<P> powers;
  for (std::size_t k = 0; k < fs.size(); ++k) powers.push_back(fs.poly(k).pow(exponents[k]));
  return Cube<P>(ctx, fs.directions(),
                 [&](Mask) { return PresentedModule<P>::free_of_rank(1); },
                 [&](Mask, std::size_t pos) { return Matrix<P>(1, 1, {powers[pos]}); });
}

template <class R>
Cube<R> cube_direct_sum(const RingCtx<R>& ctx, const Cube<R>& a, const Cube<R>& b) {
  if (!(a.dirs() == b.dirs()))
    throw std::invalid_argument("cube_direct_sum: direction sets differ");
  return Cube<R>(
      ctx, a.dirs(),
      [&](Mask m) {
        return PresentedModule<R>{Matrix<R>::diag_blocks(a.vertex(m).rel, b.vertex(m).rel)};
      },
      [&](Mask m, std::size_t pos) {
        return Matrix<R>::diag_blocks(a.boundary_matrix(m, pos), b.boundary_matrix(m, pos));
      });
}

namespace detail {

template <class F>
Poly<F> random_monomial(const RingCtx<Poly<F>>& ctx, Rng& rng, unsigned degree) {
  Expo e(ctx.nvars(), 0);
  for (unsigned i = 0; i < degree; ++i) e[(std::size_t)rng.range(0, (long)ctx.nvars() - 1)] += 1;
  return Poly<F>::monomial(e, scalar_from_long(ctx.base, 1));
}

}  // namespace detail

struct CubeGenParams {
  std::size_t max_summands = 2;
  unsigned max_exponent = 3;
  unsigned max_twists = 2;
};

// Deterministic generator: a direct sum of typ cubes with varied exponents,
// conjugated at every vertex by a random unimodular change of basis.  The
// twists are built from transvections whose off-diagonal entries are
// monomials of the exact degree difference of the generators they connect
// (plus unit rescalings), so all boundary matrices stay homogeneous for the
// inferred grading and the projective-dimension checks remain applicable.
template <class F>
Cube<Poly<F>> random_koszul_cube(const RingCtx<Poly<F>>& ctx, const RegularSequence<F>& fs,
                                 const CubeGenParams& params, std::uint64_t seed) {
  using P = Poly<F>;
  Rng rng(seed);
  std::size_t n = fs.size();
  std::size_t r = (std::size_t)rng.range(1, (long)params.max_summands);
  std::vector<std::vector<unsigned>> exps(r, std::vector<unsigned>(n));
  for (std::size_t s = 0; s < r; ++s)
    for (std::size_t k = 0; k < n; ++k)
      exps[s][k] = (unsigned)rng.range(1, (long)params.max_exponent);
  std::vector<long> fdeg(n);
  for (std::size_t k = 0; k < n; ++k) fdeg[k] = (long)fs.poly(k).degree();

  // generator degrees by vertex: e[s][T] = sum over k in T of a_sk * deg f_k
  Mask total = Mask(1) << n;
  std::vector<std::vector<long>> deg(total, std::vector<long>(r, 0));
  for (Mask m = 0; m < total; ++m)
    for (std::size_t s = 0; s < r; ++s)
      for (std::size_t k = 0; k < n; ++k)
        if (m & (Mask(1) << k)) deg[m][s] += (long)exps[s][k] * fdeg[k];

  const F one = scalar_from_long(ctx.base, 1);
  std::vector<Matrix<P>> u(total), uinv(total);
  for (Mask m = 0; m < total; ++m) {
    Matrix<P> cur = Matrix<P>::identity(r);
    Matrix<P> curinv = Matrix<P>::identity(r);
    unsigned t = (unsigned)rng.range(0, (long)params.max_twists);
    for (unsigned step = 0; step < t; ++step) {
      if (r >= 2 && rng.chance(3, 4)) {
        std::size_t i = (std::size_t)rng.range(0, (long)r - 1);
        std::size_t j = (std::size_t)rng.range(0, (long)r - 2);
        if (j >= i) ++j;
        if (deg[m][j] < deg[m][i]) std::swap(i, j);
        long c = 0;
        while (c == 0) c = rng.range(-2, 2);
        P entry = detail::random_monomial(ctx, rng, (unsigned)(deg[m][j] - deg[m][i]))
                      .scaled(scalar_from_long(ctx.base, c));
        Matrix<P> p = Matrix<P>::identity(r);
        Matrix<P> pinv = Matrix<P>::identity(r);
        p.at(i, j) = entry;
        pinv.at(i, j) = P(0) - entry;
        cur = p * cur;
        curinv = curinv * pinv;
      } else {
        std::size_t i = (std::size_t)rng.range(0, (long)r - 1);
        long c = 0;
        while (c == 0) c = rng.range(-2, 2);
        F unit = scalar_from_long(ctx.base, c);
        Matrix<P> p = Matrix<P>::identity(r);
        Matrix<P> pinv = Matrix<P>::identity(r);
        p.at(i, i) = Poly<F>(unit);
        pinv.at(i, i) = Poly<F>(one / unit);
        cur = p * cur;
        curinv = curinv * pinv;
      }
    }
    u[m] = std::move(cur);
    uinv[m] = std::move(curinv);
  }

  std::vector<P> powers(n * r);
  for (std::size_t s = 0; s < r; ++s)
    for (std::size_t k = 0; k < n; ++k) powers[s * n + k] = fs.poly(k).pow(exps[s][k]);

  return Cube<P>(
      ctx, fs.directions(), [&](Mask) { return PresentedModule<P>::free_of_rank(r); },
      [&](Mask m, std::size_t pos) {
        Matrix<P> d(r, r);
        for (std::size_t s = 0; s < r; ++s) d.at(s, s) = powers[s * n + pos];
        return u[m & ~(Mask(1) << pos)] * d * uinv[m];
      });
}

// Random homogeneous regular sequence: independent linear forms in the first
// min(count, nvars) coordinates cannot exist when count > nvars, so the
// caller must keep count <= nvars.
template <class F>
RegularSequence<F> random_regular_sequence(const RingCtx<Poly<F>>& ctx,
                                           const std::vector<std::string>& labels,
                                           std::uint64_t seed) {
  using P = Poly<F>;
  std::size_t n = labels.size();
  if (n > ctx.nvars())
    throw std::invalid_argument("random_regular_sequence: more labels than variables");
  Rng rng(seed);
  while (true) {
    Matrix<F> coeff(n, ctx.nvars());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < ctx.nvars(); ++j)
        coeff.at(i, j) = scalar_from_long(ctx.base, rng.range(-3, 3));
    if (rank_exact(coeff) != n) continue;
    std::vector<P> polys;
    for (std::size_t i = 0; i < n; ++i) {
      P f = P(0);
      for (std::size_t j = 0; j < ctx.nvars(); ++j)
        f = f + P::variable(j, coeff.at(i, j));
      polys.push_back(f);
    }
    return RegularSequence<F>(ctx, labels, std::move(polys));
  }
}

// Membership in M_A(f_U; f_V)(p): admissible, and for every subset T of the
// cube's directions each vertex of H0^T(x) is supported on V(f_{T + U}) with
// projective dimension at most p + #T.  Support and pd are decided exactly,
// so the answer is never inconclusive.
template <class F>
bool is_in_MM(const RingCtx<Poly<F>>& ctx, const Cube<Poly<F>>& x, const MMParams& params,
              const RegularSequence<F>& fs) {
  using P = Poly<F>;
  validate_mm_params(params, fs);
  {
    DirectionSet want(params.v);
    if (!(x.dirs() == want))
      throw std::invalid_argument("is_in_MM: cube directions must equal V");
  }
  if (!is_admissible(ctx, x)) return false;
  std::size_t n = x.dirs().size();
  for (Mask t = 0; t < (Mask(1) << n); ++t) {
    std::vector<std::string> support_labels = params.u;
    for (std::size_t k = 0; k < n; ++k)
      if (t & (Mask(1) << k)) support_labels.push_back(x.dirs().label(k));
    std::vector<P> support_polys = fs.polys_for(support_labels);
    long pbound = params.p + mask_popcount(t);
    Cube<P> h = h0_iterated(ctx, x, t);
    for (Mask m = 0; m < h.nverts(); ++m) {
      const PresentedModule<P>& vert = h.vertex(m);
      if (!supported_on(ctx, vert, support_polys)) return false;
      if (!pd_at_most(ctx, vert, pbound)) return false;
    }
  }
  return true;
}

// Total quasi-isomorphism: the induced map on the full iterated H0 is an
// isomorphism of presented modules.
template <class R>
bool is_total_quasi_iso(const RingCtx<R>& ctx, const CubeMap<R>& f) {
  CubeMap<R> h = h0_iterated_map(ctx, f, full_mask(f.dom().dirs().size()));
  return is_isomorphism(ctx, h.vertex_map(0));
}

// --- quasi-split kernel witness ----------------------------------------------

template <class R>
struct QuasiSplitWitness {
  Cube<R> r, s;          // kernel cube and the H0 concentrated at the empty subset
  CubeMap<R> incl;       // r -> x
  CubeMap<R> quot;       // x -> s
  bool vertex_exact = false;   // objectwise short exactness at every subset
  bool h0_trivial = false;     // H0 of r vanishes (r is tq-trivial)
  bool alpha_unique = false;   // incl is monic at every vertex
  bool beta_unique = false;    // quot is epic at every vertex
  bool pass = false;
  std::string detail;
};

// The natural transformation C : x -> s(H0^V x) is the quotient at the empty
// subset and zero elsewhere; r(x) := ker C replaces the empty-subset vertex
// by the image of the direct sum of the one-step boundaries and keeps the
// rest of x.  The report verifies the short exact rows, tq-triviality of r,
// and the mono/epi facts that force uniqueness of the comparison
// isomorphisms.
template <class R>
QuasiSplitWitness<R> quasi_split_witness(const RingCtx<R>& ctx, const Cube<R>& x) {
  QuasiSplitWitness<R> out;
  std::size_t n = x.dirs().size();
  PresentedModule<R> h0 = h0_iterated(ctx, x, full_mask(n)).vertex(0);

  out.s = Cube<R>(
      ctx, x.dirs(),
      [&](Mask m) { return m == 0 ? h0 : PresentedModule<R>(); },
      [&](Mask m, std::size_t pos) {
        Mask tgt = m & ~(Mask(1) << pos);
        return Matrix<R>(tgt == 0 ? h0.gens() : 0, 0);
      },
      false);
  out.quot = CubeMap<R>(ctx, x, out.s, [&](Mask m) {
    if (m == 0) return Matrix<R>::identity(x.vertex(0).gens());
    return Matrix<R>(0, x.vertex(m).gens());
  });

  // image of the one-step boundaries inside the empty-subset vertex
  Matrix<R> b(x.vertex(0).gens(), 0);
  std::vector<std::size_t> offsets;
  for (std::size_t k = 0; k < n; ++k) {
    offsets.push_back(b.cols());
    b = Matrix<R>::hstack(b, x.boundary_matrix(Mask(1) << k, k));
  }
  Matrix<R> big = Matrix<R>::hstack(b, x.vertex(0).rel);
  Matrix<R> ker = kernel_matrix(ctx, big);
  Matrix<R> img_rel(b.cols(), ker.cols());
  for (std::size_t j = 0; j < ker.cols(); ++j)
    for (std::size_t i = 0; i < b.cols(); ++i) img_rel.at(i, j) = ker.at(i, j);
  PresentedModule<R> img{img_rel};

  out.r = Cube<R>(
      ctx, x.dirs(), [&](Mask m) { return m == 0 ? img : x.vertex(m); },
      [&](Mask m, std::size_t pos) {
        Mask tgt = m & ~(Mask(1) << pos);
        if (tgt != 0 || n == 0) return x.boundary_matrix(m, pos);
        if (mask_popcount(m) > 1) return x.boundary_matrix(m, pos);
        // singleton boundary corestricted onto the image generators
        Matrix<R> inj(img.gens(), x.vertex(m).gens());
        for (std::size_t i = 0; i < x.vertex(m).gens(); ++i)
          inj.at(offsets[pos] + i, i) = R(1);
        return inj;
      });
  out.incl = CubeMap<R>(ctx, out.r, x, [&](Mask m) {
    if (m == 0) return b;
    return Matrix<R>::identity(x.vertex(m).gens());
  });

  // objectwise exactness; only the empty subset needs real work
  bool exact = true;
  std::string why;
  if (!fpmap_is_injective(ctx, out.incl.vertex_map(0))) {
    exact = false;
    why = "inclusion fails to be injective at {}";
  }
  if (exact && !is_zero_module(ctx, cokernel_fpmap(out.quot.vertex_map(0)))) {
    exact = false;
    why = "quotient fails to be surjective at {}";
  }
  if (exact && !fpmap_is_zero(ctx, fp_compose(out.quot.vertex_map(0), out.incl.vertex_map(0)))) {
    exact = false;
    why = "composite is nonzero at {}";
  }
  if (exact) {
    Matrix<R> k0 = kernel_fpmap(ctx, out.quot.vertex_map(0)).gens;
    Matrix<R> rel0 = x.vertex(0).rel;
    bool ker_in_img = span_contains(ctx, Matrix<R>::hstack(b, rel0), k0);
    bool img_in_ker = span_contains(ctx, Matrix<R>::hstack(k0, rel0), b);
    if (!ker_in_img || !img_in_ker) {
      exact = false;
      why = "kernel and image differ at {}";
    }
  }
  out.vertex_exact = exact;
  out.detail = why;

  out.h0_trivial = is_zero_module(ctx, h0_iterated(ctx, out.r, full_mask(n)).vertex(0));

  out.alpha_unique = true;
  out.beta_unique = true;
  for (Mask m = 0; m < x.nverts(); ++m) {
    if (!fpmap_is_injective(ctx, out.incl.vertex_map(m))) out.alpha_unique = false;
    if (!is_zero_module(ctx, cokernel_fpmap(out.quot.vertex_map(m)))) out.beta_unique = false;
  }
  out.pass = out.vertex_exact && out.h0_trivial && out.alpha_unique && out.beta_unique;
  return out;
}

// --- weak geometric presentation check ---------------------------------------

struct WgpReport {
  Verdict koszul = Verdict::fail;
  bool chain_map_ok = false;
  bool higher_vanish = false;
  bool h0_iso = false;
  bool agrees_with_totisom = false;
  bool pass = false;
};

// The quotient map (Tot x)_0 -> H0^S(x) extends by zero to a chain map from
// Tot x to the homology concentrated in degree 0; for a Koszul cube it is a
// quasi-isomorphism.  Cross-checked against the direct totalization report.
template <class F>
WgpReport wgp_check(const RingCtx<Poly<F>>& ctx, const Cube<Poly<F>>& x,
                    const RegularSequence<F>& fs, unsigned bound = 16) {
  using P = Poly<F>;
  WgpReport rep;
  rep.koszul = is_koszul_cube(ctx, x, fs, bound).verdict;
  ChainComplex<P> tot = totalize(x);
  PresentedModule<P> h0 = h0_iterated(ctx, x, full_mask(x.dirs().size())).vertex(0);
  // chain condition: the quotient kills the image of the first differential
  rep.chain_map_ok = fpmap_is_zero(
      ctx, FpMap<P>(PresentedModule<P>::free_of_rank(tot.rank(1)), h0, tot.diff(1)));
  bool higher = true;
  for (long p = tot.lo(); p <= tot.hi(); ++p) {
    if (p == 0) continue;
    higher = higher && is_zero_module(ctx, homology(ctx, tot, p));
  }
  rep.higher_vanish = higher;
  PresentedModule<P> h0_tot = homology(ctx, tot, 0);
  rep.h0_iso = h0_tot.gens() == h0.gens() &&
               is_isomorphism(ctx, FpMap<P>(h0_tot, h0, Matrix<P>::identity(h0_tot.gens())));
  bool qis = rep.chain_map_ok && rep.higher_vanish && rep.h0_iso;
  TotisomReport tr = verify_totisom(ctx, x);
  rep.agrees_with_totisom = qis == tr.pass;
  rep.pass = rep.koszul == Verdict::pass && qis && rep.agrees_with_totisom;
  return rep;
}

}  // namespace koszulkit
