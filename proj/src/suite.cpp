#include "koszulkit/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>

#include "koszulkit/groebner.hpp"
#include "koszulkit/koszul.hpp"
#include "koszulkit/smith.hpp"
#include "koszulkit/solver.hpp"
#include "koszulkit/witness.hpp"

namespace koszulkit {

namespace {

struct SampleVerdict {
  Outcome o = Outcome::pass;
  std::string note;
};

SampleVerdict sample_ok() { return {}; }
SampleVerdict sample_fail(std::string note) { return {Outcome::fail, std::move(note)}; }
SampleVerdict sample_inconclusive(std::string note) {
  return {Outcome::inconclusive, std::move(note)};
}

const RingCtx<PolyQ>& qctx3() {
  static const RingCtx<PolyQ> c{RingCtx<Rat>{}, {"x", "y", "z"}, MonOrder::grevlex};
  return c;
}

const RingCtx<PolyQ>& qctx1() {
  static const RingCtx<PolyQ> c{RingCtx<Rat>{}, {"x"}, MonOrder::grevlex};
  return c;
}

std::vector<std::string> direction_labels(std::size_t n) {
  static const std::vector<std::string> pool{"d1", "d2", "d3"};
  return std::vector<std::string>(pool.begin(), pool.begin() + n);
}

// Dense random linear sequences inflate Groebner degrees quickly once raised
// to powers, so most samples use sparse near-variable sequences with the full
// size envelope and a minority use dense ones with shallower exponents; every
// declared bound stays exercised at bounded cost.
RegularSequence<Rat> suite_sequence(const RingCtx<PolyQ>& ctx,
                                    const std::vector<std::string>& labels, Rng& rng,
                                    bool dense) {
  if (dense) return random_regular_sequence(ctx, labels, rng.next());
  std::vector<PolyQ> ps;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    PolyQ f = ctx.variable(k);
    if (rng.chance(1, 2))
      f = f + ctx.variable((k + 1) % 3) * scalar_from_long(ctx, rng.range(1, 2));
    ps.push_back(f);
  }
  return RegularSequence<Rat>(ctx, labels, ps);
}

CubeGenParams suite_cube_params(Rng& rng, bool dense, std::size_t max_summands) {
  CubeGenParams gp;
  gp.max_summands = 1 + rng.below(max_summands);
  if (dense) {
    gp.max_exponent = 2;
    gp.max_twists = 1;
  }
  return gp;
}

// --- totalization isomorphism ------------------------------------------------

SampleVerdict totisom_sample(std::size_t i, std::uint64_t seed) {
  const auto& ctx = qctx3();
  Rng rng(seed);
  std::size_t ndirs = 1 + i % 3;
  bool dense = rng.chance(1, 4);
  RegularSequence<Rat> fs = suite_sequence(ctx, direction_labels(ndirs), rng, dense);
  Cube<PolyQ> x =
      random_koszul_cube(ctx, fs, suite_cube_params(rng, dense, 4), rng.next());
  TotisomReport rep = verify_totisom(ctx, x);
  if (!rep.pass) {
    for (const auto& [deg, ok] : rep.higher_vanishing)
      if (!ok) return sample_fail("nonzero homology in degree " + std::to_string(deg));
    if (!rep.h0_iso) return sample_fail("degree-zero comparison map is not an isomorphism");
    return sample_fail("totalization report failed");
  }
  return sample_ok();
}

// --- definition equivalence --------------------------------------------------

// Corrupted cubes: a non-injective boundary, a boundary supported off the
// declared direction, and a repeated polynomial across two directions.
Cube<PolyQ> adversarial_cube(const RingCtx<PolyQ>& ctx, const RegularSequence<Rat>& fs,
                             std::size_t mode, Rng& rng) {
  std::size_t r = 1 + (std::size_t)rng.range(0, 1);
  Matrix<PolyQ> id = Matrix<PolyQ>::identity(r);
  auto scaled = [&](const PolyQ& c) {
    Matrix<PolyQ> m = id;
    for (std::size_t k = 0; k < r; ++k) m.at(k, k) = c;
    return m;
  };
  if (mode == 0) {
    // zero boundary: not monic
    DirectionSet dirs(direction_labels(1));
    return Cube<PolyQ>(
        ctx, dirs, [&](Mask) { return PresentedModule<PolyQ>::free_of_rank(r); },
        [&](Mask, std::size_t) { return Matrix<PolyQ>(r, r); });
  }
  if (mode == 1) {
    // boundary multiplies by a different sequence element: cokernel escapes
    // the direction's support
    DirectionSet dirs(direction_labels(1));
    Matrix<PolyQ> b = scaled(fs.poly(1));
    return Cube<PolyQ>(
        ctx, dirs, [&](Mask) { return PresentedModule<PolyQ>::free_of_rank(r); },
        [&](Mask, std::size_t) { return b; });
  }
  // both directions multiply by the same element: the induced boundary on the
  // direction cokernel vanishes
  DirectionSet dirs(direction_labels(2));
  Matrix<PolyQ> b = scaled(fs.poly(0));
  return Cube<PolyQ>(
      ctx, dirs, [&](Mask) { return PresentedModule<PolyQ>::free_of_rank(r); },
      [&](Mask, std::size_t) { return b; });
}

SampleVerdict membership_sample(std::size_t i, std::uint64_t seed, std::size_t positives,
                                unsigned bound) {
  const auto& ctx = qctx3();
  Rng rng(seed);
  bool expect_member = i < positives;
  bool dense = rng.chance(1, 4);
  std::size_t ndirs = expect_member ? 1 + i % 3 : 3;
  RegularSequence<Rat> fs = suite_sequence(ctx, direction_labels(ndirs), rng, dense);
  Cube<PolyQ> x;
  if (expect_member) {
    x = random_koszul_cube(ctx, fs, suite_cube_params(rng, dense, 4), rng.next());
  } else {
    x = adversarial_cube(ctx, fs, (i - positives) % 3, rng);
  }
  KoszulCheck kc = is_koszul_cube(ctx, x, fs, bound);
  if (kc.verdict == Verdict::inconclusive)
    return sample_inconclusive("koszul check inconclusive: " + kc.detail);
  MMParams mp;
  mp.v = x.dirs().labels();
  mp.p = 0;
  bool mm = is_in_MM(ctx, x, mp, fs);
  bool kz = kc.verdict == Verdict::pass;
  if (kz != mm)
    return sample_fail(std::string("definitions disagree: direct check says ") +
                       (kz ? "yes" : "no") + ", membership recursion says " +
                       (mm ? "yes" : "no"));
  if (mm != expect_member)
    return sample_fail(expect_member ? "generated cube rejected: " + kc.detail
                                     : "corrupted cube accepted");
  return sample_ok();
}

// --- zig-zag certificates ----------------------------------------------------

// Flips one sign (or, failing that, pads one entry) so the object differs
// from the one the certificate's maps were built against.
template <class R>
void corrupt_double(const RingCtx<R>& ctx, DoubleComplex<R>& z) {
  if (!z.is_empty()) {
    std::vector<ChainComplex<R>> entries;
    std::vector<ChainMap<R>> diffs;
    for (long n = z.lo(); n <= z.hi(); ++n) entries.push_back(z.entry(n));
    for (long n = z.lo() + 1; n <= z.hi(); ++n) diffs.push_back(z.outer_diff(n));
    for (auto& d : diffs)
      if (!d.is_zero()) {
        d = scale_map(d, scalar_from_long(ctx, -1));
        z = DoubleComplex<R>(z.lo(), std::move(entries), std::move(diffs));
        return;
      }
    // all outer maps are zero: negate an inner differential and rebuild the
    // (zero) outer maps against the new entries
    for (auto& e : entries) {
      if (e.is_empty()) continue;
      for (long n = e.lo() + 1; n <= e.hi(); ++n) {
        if (e.diff(n).is_zero()) continue;
        std::vector<std::size_t> ranks;
        std::vector<Matrix<R>> ds;
        for (long k = e.lo(); k <= e.hi(); ++k) ranks.push_back(e.rank(k));
        for (long k = e.lo() + 1; k <= e.hi(); ++k)
          ds.push_back(k == n ? -e.diff(k) : e.diff(k));
        e = ChainComplex<R>(e.lo(), std::move(ranks), std::move(ds));
        for (std::size_t j = 0; j + 1 < entries.size(); ++j)
          diffs[j] = ChainMap<R>(entries[j + 1], entries[j],
                                 [&](long m) {
                                   return Matrix<R>(entries[j].rank(m),
                                                    entries[j + 1].rank(m));
                                 },
                                 false);
        z = DoubleComplex<R>(z.lo(), std::move(entries), std::move(diffs));
        return;
      }
    }
  }
  // nothing to flip: change the shape instead
  ChainComplex<R> unit(0, {1}, {});
  z = double_direct_sum(z, j_embed(unit, z.is_empty() ? 0 : z.lo()));
}

SampleVerdict certificates_sample(std::uint64_t seed, bool mutate) {
  RingCtx<Rat> ctx;
  DoubleComplex<Rat> z = random_double_complex(ctx, seed);
  ZigzagCertificate<Rat> cert = zigzag_to_tot(ctx, z);
  if (mutate) {
    if (cert.steps.empty())
      corrupt_double(ctx, cert.end);
    else
      corrupt_double(ctx, cert.steps[0].after);
  }
  CertificateCheck chk = verify_certificate(ctx, cert);
  if (!chk.pass)
    return sample_fail("step " + std::to_string(chk.failed_step) + ": " + chk.reason);
  DoubleComplex<Rat> expect = j_embed(shift(tot_outer(z), cert.shift_k), cert.shift_k);
  if (!(cert.end == expect))
    return sample_fail("endpoint is not the declared shift of the totalization");
  return sample_ok();
}

// --- cone comparison ---------------------------------------------------------

SampleVerdict cones_sample(std::uint64_t seed) {
  RingCtx<Rat> ctx;
  Rng rng(seed);
  DoubleComplex<Rat> x = random_double_complex(ctx, rng.next());
  DoubleComplexMap<Rat> f = random_outer_endo(ctx, x, rng.next());
  ConeCompare<Rat> cc = cone_compare(ctx, f);
  if (!cc.steps_ok) return sample_fail("comparison certificate rejected");
  if (!cc.homology_agree)
    return sample_fail("totalized cone homologies are not isomorphic");
  if (!cc.pass) return sample_fail("cone comparison failed");
  return sample_ok();
}

// --- quasi-split witness across splittings -----------------------------------

// Presentation of (A/(h_1, ..., h_k))^gens: one relation column per
// generator-and-h pair.
Matrix<PolyQ> power_quotient_rel(std::size_t gens, const std::vector<PolyQ>& hs) {
  Matrix<PolyQ> rel(gens, gens * hs.size());
  for (std::size_t g = 0; g < gens; ++g)
    for (std::size_t j = 0; j < hs.size(); ++j) rel.at(g, g * hs.size() + j) = hs[j];
  return rel;
}

SampleVerdict splittings_sample(std::size_t i, std::uint64_t seed) {
  const auto& ctx = qctx3();
  Rng rng(seed);
  bool dense = rng.chance(1, 4);
  RegularSequence<Rat> fs = suite_sequence(ctx, direction_labels(3), rng, dense);
  unsigned vbits = (unsigned)(i % 8);
  std::vector<std::string> vlab, ulab;
  for (std::size_t k = 0; k < 3; ++k)
    (vbits & (1u << k) ? vlab : ulab).push_back(fs.label(k));
  std::vector<PolyQ> hs;
  for (const auto& l : ulab)
    hs.push_back(fs.poly_for(l).pow(1 + (unsigned)rng.range(0, 1)));

  Cube<PolyQ> x;
  if (vlab.empty()) {
    std::size_t r = 1 + (std::size_t)rng.range(0, 1);
    Matrix<PolyQ> rel = power_quotient_rel(r, hs);
    x = Cube<PolyQ>(
        ctx, DirectionSet(std::vector<std::string>{}),
        [&](Mask) { return PresentedModule<PolyQ>(rel); },
        [&](Mask, std::size_t) { return Matrix<PolyQ>(0, 0); });
  } else {
    RegularSequence<Rat> sub(ctx, vlab, fs.polys_for(vlab));
    Cube<PolyQ> k = random_koszul_cube(ctx, sub, suite_cube_params(rng, dense, 2),
                                       rng.next());
    if (ulab.empty()) {
      x = k;
    } else {
      x = Cube<PolyQ>(
          ctx, k.dirs(),
          [&](Mask m) {
            return PresentedModule<PolyQ>(power_quotient_rel(k.vertex(m).gens(), hs));
          },
          [&](Mask m, std::size_t pos) { return k.boundary_matrix(m, pos); });
    }
  }

  MMParams mp;
  mp.u = ulab;
  mp.v = vlab;
  mp.p = (long)ulab.size();
  if (!is_in_MM(ctx, x, mp, fs))
    return sample_fail("generated cube escapes the declared membership class");
  QuasiSplitWitness<PolyQ> w = quasi_split_witness(ctx, x);
  if (!w.vertex_exact)
    return sample_fail(w.detail.empty() ? "objectwise exactness fails" : w.detail);
  if (!w.h0_trivial) return sample_fail("kernel cube has nonvanishing iterated homology");
  if (!w.alpha_unique || !w.beta_unique)
    return sample_fail("comparison isomorphisms are not unique");
  if (!w.pass) return sample_fail("quasi-split witness failed");
  return sample_ok();
}

// --- retraction splitting ----------------------------------------------------

// Scale one differential by a non-unit so the homology carries torsion.
template <class R>
ChainComplex<R> add_torsion(const RingCtx<R>& ctx, const ChainComplex<R>& x, Rng& rng) {
  if (x.is_empty() || x.hi() == x.lo()) return x;
  long n = x.lo() + 1 + (long)rng.below((std::uint64_t)(x.hi() - x.lo()));
  R c = scalar_from_long(ctx, 2);
  if constexpr (RingTraits<R>::is_polynomial) c = ctx.variable(0);
  std::vector<std::size_t> ranks;
  std::vector<Matrix<R>> ds;
  for (long k = x.lo(); k <= x.hi(); ++k) ranks.push_back(x.rank(k));
  for (long k = x.lo() + 1; k <= x.hi(); ++k) {
    Matrix<R> d = x.diff(k);
    if (k == n)
      for (std::size_t a = 0; a < d.rows(); ++a)
        for (std::size_t b = 0; b < d.cols(); ++b) d.at(a, b) = c * d.at(a, b);
    ds.push_back(std::move(d));
  }
  return ChainComplex<R>(x.lo(), std::move(ranks), std::move(ds));
}

template <class R>
SampleVerdict retraction_case(const RingCtx<R>& ctx, std::uint64_t seed) {
  Rng rng(seed);
  ChainComplex<R> x = add_torsion(ctx, random_free_complex(ctx, rng, -1, 1, 2, 2), rng);
  ChainComplex<R> z = add_torsion(ctx, random_free_complex(ctx, rng, -1, 1, 2, 2), rng);
  ChainComplex<R> y = direct_sum(x, z);

  // twisted split inclusion i = (id, h) against the projection retraction
  Homotopy<R> hom(x, z, [&](long n) {
    Matrix<R> m(z.rank(n + 1), x.rank(n));
    for (std::size_t a = 0; a < m.rows(); ++a)
      for (std::size_t b = 0; b < m.cols(); ++b)
        m.at(a, b) = scalar_from_long(ctx, rng.range(-2, 2));
    return m;
  });
  ChainMap<R> incl(x, y, [&](long n) {
    return Matrix<R>::vstack(Matrix<R>::identity(x.rank(n)), hom.boundary_expression(n));
  });
  ChainMap<R> retr(y, x, [&](long n) {
    return Matrix<R>::hstack(Matrix<R>::identity(x.rank(n)),
                             Matrix<R>(x.rank(n), z.rank(n)));
  });
  if (!(compose(retr, incl) == ChainMap<R>::identity(x)))
    return sample_fail("retraction is not a strict one-sided inverse");

  ChainComplex<R> cn = cone(incl);
  ChainMap<R> kappa = cone_kappa(incl);
  ChainComplex<R> target = direct_sum(x, cn);
  ChainMap<R> split(y, target, [&](long n) {
    return Matrix<R>::vstack(retr.comp(n), kappa.comp(n));
  });
  if (!is_quasi_iso(ctx, split))
    return sample_fail("comparison with the cone summand is not a quasi-isomorphism");
  return sample_ok();
}

SampleVerdict retractions_sample(std::size_t i, std::uint64_t seed) {
  if (i % 2 == 0) return retraction_case(RingCtx<Int>{}, seed);
  return retraction_case(qctx1(), seed);
}

// --- extension / restriction / homology functor identities -------------------

SampleVerdict functors_sample(std::size_t i, std::uint64_t seed) {
  const auto& ctx = qctx3();
  Rng rng(seed);
  std::size_t nl = 1 + i % 3;
  std::vector<std::string> base = direction_labels(nl);
  std::vector<std::string> fresh;
  for (const auto& l : direction_labels(3))
    if (std::find(base.begin(), base.end(), l) == base.end()) fresh.push_back(l);

  bool dense = rng.chance(1, 4);
  RegularSequence<Rat> fs = suite_sequence(ctx, base, rng, dense);
  Cube<PolyQ> x = random_koszul_cube(ctx, fs, suite_cube_params(rng, dense, 2), rng.next());

  for (unsigned wb1 = 0; wb1 < (1u << base.size()); ++wb1)
    for (unsigned wb2 = 0; wb2 < (1u << fresh.size()); ++wb2) {
      std::vector<std::string> w1, w2;
      for (std::size_t k = 0; k < base.size(); ++k)
        if (wb1 & (1u << k)) w1.push_back(base[k]);
      for (std::size_t k = 0; k < fresh.size(); ++k)
        if (wb2 & (1u << k)) w2.push_back(fresh[k]);

      Cube<PolyQ> e = ext_functor(ctx, x, w2);
      if (!(res_functor(ctx, e, w2, 0) == x) || !(res_functor(ctx, e, w2, 1) == x))
        return sample_fail("restriction after extension is not the identity");

      Cube<PolyQ> lhs = h_functor(ctx, e, w1);
      Cube<PolyQ> rhs = ext_functor(ctx, h_functor(ctx, x, w1), w2);
      if (!(lhs.dirs() == rhs.dirs()))
        return sample_fail("homology-extension exchange changes the direction set");
      for (Mask m = 0; m < lhs.nverts(); ++m)
        if (lhs.vertex(m).gens() != rhs.vertex(m).gens())
          return sample_fail("homology-extension exchange changes a generator count");
      CubeMap<PolyQ> iso(ctx, lhs, rhs, [&](Mask m) {
        return Matrix<PolyQ>::identity(lhs.vertex(m).gens());
      });
      for (Mask m = 0; m < lhs.nverts(); ++m)
        if (!is_isomorphism(ctx, iso.vertex_map(m)))
          return sample_fail("canonical comparison fails to be an isomorphism");
    }
  return sample_ok();
}

// --- Euler characteristic bookkeeping ----------------------------------------

template <class R>
long euler_char(const ChainComplex<R>& x) {
  long chi = 0;
  if (x.is_empty()) return chi;
  for (long n = x.lo(); n <= x.hi(); ++n)
    chi += (n % 2 == 0 ? 1 : -1) * (long)x.rank(n);
  return chi;
}

SampleVerdict euler_sample(std::size_t i, std::uint64_t seed) {
  const auto& ctx = qctx3();
  Rng rng(seed);
  std::size_t ndirs = 1 + i % 3;
  RegularSequence<Rat> fs =
      random_regular_sequence(ctx, direction_labels(ndirs), rng.next());
  CubeGenParams gp;
  gp.max_summands = 1 + (std::size_t)rng.range(0, 3);
  Cube<PolyQ> x = random_koszul_cube(ctx, fs, gp, rng.next());
  long alt = 0;
  for (Mask m = 0; m < x.nverts(); ++m)
    alt += (mask_popcount(m) % 2 == 0 ? 1 : -1) * (long)x.vertex(m).gens();
  if (alt != 0)
    return sample_fail("alternating rank sum is " + std::to_string(alt));

  RingCtx<Rat> rc;
  ChainComplex<Rat> a = random_free_complex(rc, rng, -1, 1, 3, 3);
  ChainComplex<Rat> b = random_free_complex(rc, rng, -1, 1, 3, 3);
  Homotopy<Rat> hom(a, b, [&](long n) {
    Matrix<Rat> m(b.rank(n + 1), a.rank(n));
    for (std::size_t p = 0; p < m.rows(); ++p)
      for (std::size_t q = 0; q < m.cols(); ++q) m.at(p, q) = Rat(rng.range(-2, 2));
    return m;
  });
  ChainMap<Rat> f(a, b, [&](long n) { return hom.boundary_expression(n); });
  long lhs = euler_char(cone(f));
  long rhs = euler_char(b) - euler_char(a);
  if (lhs != rhs)
    return sample_fail("cone characteristic " + std::to_string(lhs) + " differs from " +
                       std::to_string(rhs));
  return sample_ok();
}

// --- kernel oracles ----------------------------------------------------------

Expo trimmed(Expo e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
  return e;
}

void enumerate_expos(std::size_t nvars, unsigned maxdeg, std::size_t pos, unsigned used,
                     Expo& cur, std::vector<Expo>& out) {
  if (pos == nvars) {
    out.push_back(trimmed(cur));
    return;
  }
  for (unsigned e = 0; used + e <= maxdeg; ++e) {
    cur[pos] = e;
    enumerate_expos(nvars, maxdeg, pos + 1, used + e, cur, out);
  }
  cur[pos] = 0;
}

PolyQ random_dense_poly(const RingCtx<PolyQ>& ctx, Rng& rng, unsigned maxdeg) {
  PolyQ p = PolyQ(0);
  std::size_t terms = 1 + (std::size_t)rng.range(0, 2);
  for (std::size_t t = 0; t < terms; ++t) {
    long c = rng.range(-3, 3);
    if (c == 0) c = 1;
    p = p + detail::random_monomial(ctx, rng, (unsigned)rng.range(0, (long)maxdeg)) *
                scalar_from_long(ctx, c);
  }
  if (p.zero()) p = scalar_from_long(ctx, 1);
  return p;
}

SampleVerdict crosscheck_sample(std::size_t i, std::uint64_t seed) {
  Rng rng(seed);

  // Groebner membership against degree-truncated linear algebra
  std::size_t nvars = 1 + i % 3;
  std::vector<std::string> vars{"x", "y", "z"};
  vars.resize(nvars);
  RingCtx<PolyQ> ctx{RingCtx<Rat>{}, vars, MonOrder::grevlex};

  std::size_t ngens = 1 + (std::size_t)rng.range(0, 2);
  std::vector<PolyQ> gens;
  for (std::size_t g = 0; g < ngens; ++g) gens.push_back(random_dense_poly(ctx, rng, 2));
  bool build_member = rng.chance(1, 2);
  PolyQ f = PolyQ(0);
  if (build_member) {
    for (std::size_t g = 0; g < ngens; ++g)
      f = f + random_dense_poly(ctx, rng, 2) * gens[g];
  } else {
    f = random_dense_poly(ctx, rng, 4);
  }

  Matrix<PolyQ> gm(1, ngens);
  for (std::size_t g = 0; g < ngens; ++g) gm.at(0, g) = gens[g];
  ModuleBasis<Rat> basis(gm, ctx.order);
  bool gb_member = basis.contains(MVec<Rat>{f});

  unsigned maxgen = 0;
  for (const auto& g : gens) maxgen = std::max(maxgen, g.degree());
  unsigned cap = f.degree() + maxgen + 1;
  if (gb_member) {
    Matrix<PolyQ> tgt(1, 1);
    tgt.at(0, 0) = f;
    auto cof = basis.lift(tgt);
    if (!cof) return sample_fail("membership asserted but no cofactors found");
    PolyQ recomposed = PolyQ(0);
    cap = 0;
    for (std::size_t g = 0; g < ngens; ++g) {
      recomposed = recomposed + cof->at(g, 0) * gens[g];
      if (!cof->at(g, 0).zero())
        cap = std::max(cap, cof->at(g, 0).degree() + gens[g].degree());
    }
    if (!(recomposed == f)) return sample_fail("cofactor identity fails");
  }

  std::vector<Expo> monos;
  Expo cur(nvars, 0);
  enumerate_expos(nvars, cap, 0, 0, cur, monos);
  std::map<Expo, std::size_t> row_of;
  for (const auto& e : monos) row_of.emplace(e, row_of.size());

  std::vector<PolyQ> cols;
  for (const auto& g : gens) {
    if (g.zero()) continue;
    for (const auto& e : monos) {
      unsigned d = 0;
      for (unsigned v : e) d += v;
      if (d + g.degree() > cap) continue;
      cols.push_back(Poly<Rat>::monomial(e, Rat(1)) * g);
    }
  }
  Matrix<Rat> span(row_of.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& t : cols[j].terms()) span.at(row_of.at(t.e), j) = t.c;
  Matrix<Rat> target(row_of.size(), 1);
  for (const auto& t : f.terms()) target.at(row_of.at(t.e), 0) = t.c;
  bool dense_member = span_contains(RingCtx<Rat>{}, span, target);
  if (dense_member != gb_member)
    return sample_fail(std::string("membership oracles disagree: basis says ") +
                       (gb_member ? "yes" : "no"));

  // Smith form against determinantal divisors
  std::size_t rows = 1 + (std::size_t)rng.range(0, 3);
  std::size_t colsn = 1 + (std::size_t)rng.range(0, 3);
  Matrix<Int> m(rows, colsn);
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < colsn; ++b) m.at(a, b) = Int(rng.range(-9, 9));
  SmithResult<Int> s = smith_normal_form(m);
  if (!smith_verify(m, s)) return sample_fail("smith transform identity fails");

  std::size_t kmax = std::min(rows, colsn);
  Int prod = 1;
  for (std::size_t k = 1; k <= kmax; ++k) {
    Int dk = 0;
    std::vector<std::size_t> ri(k), ci(k);
    for (std::size_t t = 0; t < k; ++t) ri[t] = t;
    auto advance = [&](std::vector<std::size_t>& idx, std::size_t n) {
      std::size_t t = k;
      while (t > 0) {
        --t;
        if (idx[t] + (k - t) < n + 1 && idx[t] + 1 + (k - 1 - t) < n) {
          ++idx[t];
          for (std::size_t u = t + 1; u < k; ++u) idx[u] = idx[u - 1] + 1;
          return true;
        }
      }
      return false;
    };
    bool more_rows = true;
    while (more_rows) {
      for (std::size_t t = 0; t < k; ++t) ci[t] = t;
      bool more_cols = true;
      while (more_cols) {
        Matrix<Int> sub(k, k);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) sub.at(a, b) = m.at(ri[a], ci[b]);
        Int det = det_exact(sub);
        mpz_gcd(dk.get_mpz_t(), dk.get_mpz_t(), det.get_mpz_t());
        more_cols = advance(ci, colsn);
      }
      more_rows = advance(ri, rows);
    }
    if (k <= s.invariants.size()) {
      prod = prod * s.invariants[k - 1];
      if (!(prod == dk))
        return sample_fail("determinantal divisor mismatch at order " + std::to_string(k));
    } else if (!(dk == 0)) {
      return sample_fail("nonzero minors beyond the smith rank at order " +
                         std::to_string(k));
    }
  }
  return sample_ok();
}

// --- negative controls -------------------------------------------------------

SampleVerdict negative_sample(std::size_t i) {
  if (i == 0) {
    // a cone differential with one block sign flipped must fail the
    // square-zero test
    ChainComplex<Rat> x(0, {1, 1}, {Matrix<Rat>(1, 1, {Rat(1)})});
    ChainComplex<Rat> c = cone(ChainMap<Rat>::identity(x));
    Matrix<Rat> d1 = c.diff(1);
    d1.at(0, 0) = -d1.at(0, 0);
    try {
      ChainComplex<Rat> corrupted(c.lo(), {c.rank(0), c.rank(1), c.rank(2)},
                                  {d1, c.diff(2)});
      return sample_fail("sign-flipped cone differential accepted");
    } catch (const std::invalid_argument&) {
      return sample_ok();
    }
  }
  if (i == 1) {
    const auto& ctx = qctx3();
    try {
      RegularSequence<Rat> bad(ctx, {"d1", "d2"},
                               {ctx.variable(0), ctx.variable(0)});
      return sample_fail("repeated element accepted as a regular sequence");
    } catch (const std::invalid_argument&) {
      return sample_ok();
    }
  }
  // relabeling a levelwise arrow as a quasi-isomorphism must be caught
  RingCtx<Rat> ctx;
  std::uint64_t s = 3;
  DoubleComplex<Rat> x = random_double_complex(ctx, s);
  while (x.is_empty() || x.hi() == x.lo()) x = random_double_complex(ctx, ++s);
  ZigzagCertificate<Rat> cert = zigzag_to_tot(ctx, x);
  ZigzagCertificate<Rat> bad = cert;
  bad.steps[1].tag = StepTag::qis;
  CertificateCheck chk = verify_certificate(ctx, bad);
  if (chk.pass) return sample_fail("mislabeled certificate step accepted");
  if (chk.failed_step != 1)
    return sample_fail("mislabeled step reported at the wrong index");
  return sample_ok();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "totisom",     "membership", "certificates", "cones",      "splittings",
      "retractions", "functors",   "euler",        "crosscheck", "negative"};
  return names;
}

bool is_suite_name(const std::string& name) {
  const auto& ns = suite_names();
  return std::find(ns.begin(), ns.end(), name) != ns.end();
}

std::size_t suite_default_count(const std::string& name) {
  if (name == "totisom") return 500;
  if (name == "membership") return 500;
  if (name == "certificates") return 100;
  if (name == "cones") return 100;
  if (name == "splittings") return 200;
  if (name == "retractions") return 100;
  if (name == "functors") return 200;
  if (name == "euler") return 200;
  if (name == "crosscheck") return 300;
  if (name == "negative") return 3;
  throw std::invalid_argument("unknown suite: " + name);
}

unsigned thread_budget(unsigned requested) {
  if (requested) return requested;
  if (const char* env = std::getenv("KOSZULKIT_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0 && v < 1024) return (unsigned)v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

Outcome SuiteResult::outcome() const {
  if (failures) return Outcome::fail;
  if (inconclusives) return Outcome::inconclusive;
  return Outcome::pass;
}

CheckRecord SuiteResult::to_check() const {
  std::string detail = std::to_string(samples) + " samples";
  if (failures) detail += ", " + std::to_string(failures) + " failed";
  if (inconclusives) detail += ", " + std::to_string(inconclusives) + " inconclusive";
  if (!failure_notes.empty()) detail += "; " + failure_notes.front();
  return CheckRecord{name, outcome(), detail};
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
  if (!is_suite_name(name)) throw std::invalid_argument("unknown suite: " + name);
  if (!opt.mutate.empty() && opt.mutate != "cone-sign")
    throw std::invalid_argument("unknown mutation: " + opt.mutate);

  std::size_t base = opt.count_given ? opt.count : suite_default_count(name);
  std::size_t total = base;
  if (name == "membership") total = base + base / 10;
  if (name == "negative") total = std::min<std::size_t>(base, 3);

  const bool mutate = !opt.mutate.empty() && name == "certificates";
  const unsigned bound = opt.bound;
  std::function<SampleVerdict(std::size_t, std::uint64_t)> fn;
  if (name == "totisom") {
    fn = [](std::size_t i, std::uint64_t s) { return totisom_sample(i, s); };
  } else if (name == "membership") {
    fn = [base, bound](std::size_t i, std::uint64_t s) {
      return membership_sample(i, s, base, bound);
    };
  } else if (name == "certificates") {
    fn = [mutate](std::size_t, std::uint64_t s) { return certificates_sample(s, mutate); };
  } else if (name == "cones") {
    fn = [](std::size_t, std::uint64_t s) { return cones_sample(s); };
  } else if (name == "splittings") {
    fn = [](std::size_t i, std::uint64_t s) { return splittings_sample(i, s); };
  } else if (name == "retractions") {
    fn = [](std::size_t i, std::uint64_t s) { return retractions_sample(i, s); };
  } else if (name == "functors") {
    fn = [](std::size_t i, std::uint64_t s) { return functors_sample(i, s); };
  } else if (name == "euler") {
    fn = [](std::size_t i, std::uint64_t s) { return euler_sample(i, s); };
  } else if (name == "crosscheck") {
    fn = [](std::size_t i, std::uint64_t s) { return crosscheck_sample(i, s); };
  } else {
    fn = [](std::size_t i, std::uint64_t) { return negative_sample(i); };
  }

  const std::uint64_t salt = fnv1a64(name);
  std::vector<SampleVerdict> results(total);
  auto run_one = [&](std::size_t i) {
    try {
      results[i] = fn(i, Rng::derive(opt.seed, salt, i));
    } catch (const std::exception& e) {
      results[i] = sample_fail(std::string("unexpected error: ") + e.what());
    }
  };

  unsigned width = thread_budget(opt.threads);
  if ((std::size_t)width > total) width = (unsigned)total;
  if (width <= 1) {
    for (std::size_t i = 0; i < total; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < width; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) run_one(i);
      });
    for (auto& th : pool) th.join();
  }

  SuiteResult res;
  res.name = name;
  res.samples = total;
  for (std::size_t i = 0; i < total; ++i) {
    if (results[i].o == Outcome::pass) continue;
    if (results[i].o == Outcome::inconclusive)
      ++res.inconclusives;
    else
      ++res.failures;
    if (res.failure_notes.size() < 8)
      res.failure_notes.push_back("sample " + std::to_string(i) + ": " + results[i].note);
  }
  return res;
}

}  // namespace koszulkit
