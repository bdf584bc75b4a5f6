#pragma once

// Finitely presented modules and their maps.  A module is the cokernel of a
// relation matrix; a map is a matrix on generators that must carry relations
// into relations.  Everything reduces to span questions answered by LinSolver,
// so the same code runs over fields, the integers, and polynomial rings.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "koszulkit/matrix.hpp"
#include "koszulkit/ring.hpp"
#include "koszulkit/smith.hpp"
#include "koszulkit/solver.hpp"

namespace koszulkit {

// coker(rel): generators = rows, relation columns = rel's columns
template <class R>
struct PresentedModule {
  Matrix<R> rel;

  PresentedModule() : rel(0, 0) {}
  explicit PresentedModule(Matrix<R> r) : rel(std::move(r)) {}
  static PresentedModule free_of_rank(std::size_t n) { return PresentedModule(Matrix<R>(n, 0)); }

  std::size_t gens() const { return rel.rows(); }
  bool operator==(const PresentedModule& o) const { return rel == o.rel; }
};

template <class R>
struct FpMap {
  PresentedModule<R> dom, cod;
  Matrix<R> f;  // cod.gens() x dom.gens()

  FpMap() : f(0, 0) {}
  FpMap(PresentedModule<R> d, PresentedModule<R> c, Matrix<R> m)
      : dom(std::move(d)), cod(std::move(c)), f(std::move(m)) {
    if (f.rows() != cod.gens() || f.cols() != dom.gens())
      throw std::invalid_argument("FpMap: matrix shape does not match generators");
  }
  static FpMap identity(const PresentedModule<R>& m) {
    return FpMap(m, m, Matrix<R>::identity(m.gens()));
  }
};

template <class R>
bool span_contains(const RingCtx<R>& ctx, const Matrix<R>& span_gens, const Matrix<R>& targets) {
  return LinSolver<R>(ctx, span_gens).contains_all(targets);
}

// f maps every relation of its domain into the relation span of its codomain.
template <class R>
bool fpmap_well_defined(const RingCtx<R>& ctx, const FpMap<R>& g) {
  if (g.dom.rel.cols() == 0) return true;
  return span_contains(ctx, g.cod.rel, g.f * g.dom.rel);
}

template <class R>
FpMap<R> fp_compose(const FpMap<R>& g, const FpMap<R>& h) {  // g after h
  if (!(h.cod == g.dom)) throw std::invalid_argument("fp_compose: middle modules differ");
  return FpMap<R>(h.dom, g.cod, g.f * h.f);
}

template <class R>
bool is_zero_module(const RingCtx<R>& ctx, const PresentedModule<R>& m) {
  if (m.gens() == 0) return true;
  return span_contains(ctx, m.rel, Matrix<R>::identity(m.gens()));
}

// The map is zero iff every generator image lies in the codomain's relations.
template <class R>
bool fpmap_is_zero(const RingCtx<R>& ctx, const FpMap<R>& g) {
  if (g.f.is_zero()) return true;
  return span_contains(ctx, g.cod.rel, g.f);
}

// --- kernels, cokernels, homology -------------------------------------------

template <class R>
Matrix<R> kernel_matrix(const RingCtx<R>& ctx, const Matrix<R>& m) {
  return LinSolver<R>(ctx, m).kernel();
}

// Injectivity of a map of free modules over a domain, with an independent
// fraction-free rank cross-check.
template <class R>
bool is_injective(const RingCtx<R>& ctx, const Matrix<R>& m) {
  bool by_kernel = kernel_matrix(ctx, m).cols() == 0;
  bool by_rank = rank_exact(m) == m.cols();
  if (by_kernel != by_rank)
    throw std::logic_error("is_injective: kernel and rank computations disagree");
  return by_kernel;
}

// Generators (in domain-generator coordinates) of ker g, with a presentation
// of the kernel as a module.
template <class R>
struct SubmoduleGens {
  Matrix<R> gens;          // parent.gens() x (number of kernel generators)
  PresentedModule<R> mod;  // presentation of the kernel itself
};

template <class R>
SubmoduleGens<R> kernel_fpmap(const RingCtx<R>& ctx, const FpMap<R>& g) {
  const std::size_t m = g.dom.gens();
  Matrix<R> big = Matrix<R>::hstack(g.f, g.cod.rel);
  Matrix<R> ker = kernel_matrix(ctx, big);
  Matrix<R> k0(m, ker.cols());
  for (std::size_t j = 0; j < ker.cols(); ++j)
    for (std::size_t i = 0; i < m; ++i) k0.at(i, j) = ker.at(i, j);
  // relations among the kernel generators: combinations landing in dom's relations
  Matrix<R> big2 = Matrix<R>::hstack(k0, g.dom.rel);
  Matrix<R> ker2 = kernel_matrix(ctx, big2);
  Matrix<R> rels(k0.cols(), ker2.cols());
  for (std::size_t j = 0; j < ker2.cols(); ++j)
    for (std::size_t i = 0; i < k0.cols(); ++i) rels.at(i, j) = ker2.at(i, j);
  return {std::move(k0), PresentedModule<R>(std::move(rels))};
}

template <class R>
PresentedModule<R> cokernel_fpmap(const FpMap<R>& g) {
  return PresentedModule<R>(Matrix<R>::hstack(g.f, g.cod.rel));
}

// ker d0 / im d1 for composable maps with d0 * d1 = 0.
template <class R>
PresentedModule<R> homology_pair(const RingCtx<R>& ctx, const FpMap<R>& d1, const FpMap<R>& d0) {
  if (!(d1.cod == d0.dom)) throw std::invalid_argument("homology_pair: maps not composable");
  if (!fpmap_is_zero(ctx, fp_compose(d0, d1)))
    throw std::invalid_argument("homology_pair: composite is not zero");
  SubmoduleGens<R> ker = kernel_fpmap(ctx, d0);
  // express the image generators of d1 in kernel coordinates
  Matrix<R> embed = Matrix<R>::hstack(ker.gens, d0.dom.rel);
  auto lifted = LinSolver<R>(ctx, embed).lift(d1.f);
  if (!lifted)
    throw std::logic_error("homology_pair: image does not lie in the kernel");
  Matrix<R> l(ker.gens.cols(), d1.f.cols());
  for (std::size_t j = 0; j < d1.f.cols(); ++j)
    for (std::size_t i = 0; i < ker.gens.cols(); ++i) l.at(i, j) = lifted->at(i, j);
  return PresentedModule<R>(Matrix<R>::hstack(ker.mod.rel, l));
}

template <class R>
bool is_isomorphism(const RingCtx<R>& ctx, const FpMap<R>& g) {
  if (!fpmap_well_defined(ctx, g)) throw std::invalid_argument("is_isomorphism: map is not well defined");
  // injective: every kernel generator is already zero in the domain
  SubmoduleGens<R> ker = kernel_fpmap(ctx, g);
  if (ker.gens.cols() > 0 && !span_contains(ctx, g.dom.rel, ker.gens)) return false;
  // surjective: the cokernel is the zero module
  return is_zero_module(ctx, cokernel_fpmap(g));
}

// --- annihilation and support -----------------------------------------------

// Least m <= bound with f^m * M = 0, if any.
template <class R>
std::optional<unsigned> power_annihilates(const RingCtx<R>& ctx, const R& f,
                                          const PresentedModule<R>& m, unsigned bound) {
  if (bound < 1) throw std::invalid_argument("power_annihilates: bound must be >= 1");
  if (m.gens() == 0) return 1u;
  LinSolver<R> solver(ctx, m.rel);
  R power = f;
  for (unsigned e = 1; e <= bound; ++e) {
    if (solver.contains_all(Matrix<R>::identity(m.gens()).scaled(power))) return e;
    power = power * f;
  }
  return std::nullopt;
}

// Saturation (rel : f^infinity) by iterated colon modules; terminates because
// the ascending chain of spans stabilizes.
template <class R>
Matrix<R> saturate_relations(const RingCtx<R>& ctx, const Matrix<R>& rel, const R& f) {
  const std::size_t n = rel.rows();
  Matrix<R> cur = rel;
  while (true) {
    // (span cur : f) = first-n rows of ker [f*I | cur]
    Matrix<R> big = Matrix<R>::hstack(Matrix<R>::identity(n).scaled(f), cur);
    Matrix<R> ker = kernel_matrix(ctx, big);
    Matrix<R> colon(n, ker.cols());
    for (std::size_t j = 0; j < ker.cols(); ++j)
      for (std::size_t i = 0; i < n; ++i) colon.at(i, j) = ker.at(i, j);
    // stabilized when the colon span already lies in the current span
    if (colon.cols() == 0 || span_contains(ctx, cur, colon)) return cur;
    cur = Matrix<R>::hstack(cur, colon);
  }
}

// True iff each f kills the module after inverting it: the saturation of the
// relations at every listed element reaches the whole free cover.
template <class R>
bool supported_on(const RingCtx<R>& ctx, const PresentedModule<R>& m, const std::vector<R>& fs) {
  if (m.gens() == 0) return true;
  for (const R& f : fs) {
    Matrix<R> sat = saturate_relations(ctx, m.rel, f);
    if (!span_contains(ctx, sat, Matrix<R>::identity(m.gens()))) return false;
  }
  return true;
}

// --- projective dimension ---------------------------------------------------

namespace detail {

// Generator degrees making every relation column homogeneous, if they exist.
template <class F>
std::optional<std::vector<long>> infer_grading(const Matrix<Poly<F>>& rel) {
  const std::size_t n = rel.rows(), k = rel.cols();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (!rel.at(i, j).homogeneous()) return std::nullopt;
  std::vector<std::optional<long>> deg(n);
  auto first_unassigned = [&]() {
    for (std::size_t i = 0; i < n; ++i)
      if (!deg[i]) return i;
    return n;
  };
  while (true) {
    std::size_t seed = first_unassigned();
    if (seed == n) break;
    deg[seed] = 0;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t j = 0; j < k; ++j) {
        std::optional<long> cdeg;  // degree of column j as a homogeneous element
        for (std::size_t i = 0; i < n; ++i) {
          if (rel.at(i, j).zero() || !deg[i]) continue;
          long d = *deg[i] + (long)rel.at(i, j).degree();
          if (!cdeg) cdeg = d;
          else if (*cdeg != d) return std::nullopt;
        }
        if (!cdeg) continue;
        for (std::size_t i = 0; i < n; ++i) {
          if (rel.at(i, j).zero()) continue;
          long want = *cdeg - (long)rel.at(i, j).degree();
          if (!deg[i]) {
            deg[i] = want;
            changed = true;
          } else if (*deg[i] != want) {
            return std::nullopt;
          }
        }
      }
    }
  }
  std::vector<long> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = *deg[i];
  return out;
}

// Remove generator/relation pairs joined by a unit entry (Gaussian pivoting),
// yielding a presentation with all entries in the maximal ideal.
template <class F>
void prune_presentation(Matrix<Poly<F>>& rel, std::vector<long>& deg) {
  using P = Poly<F>;
  while (true) {
    std::size_t pi = rel.rows(), pj = 0;
    for (std::size_t i = 0; i < rel.rows() && pi == rel.rows(); ++i)
      for (std::size_t j = 0; j < rel.cols(); ++j)
        if (!rel.at(i, j).zero() && rel.at(i, j).constant()) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == rel.rows()) return;
    F inv = F(1) / rel.at(pi, pj).terms()[0].c;
    for (std::size_t i = 0; i < rel.rows(); ++i) rel.at(i, pj) = rel.at(i, pj).scaled(inv);
    for (std::size_t j = 0; j < rel.cols(); ++j) {
      if (j == pj || rel.at(pi, j).zero()) continue;
      P c = rel.at(pi, j);
      for (std::size_t i = 0; i < rel.rows(); ++i)
        rel.at(i, j) -= c * rel.at(i, pj);
    }
    for (std::size_t i = 0; i < rel.rows(); ++i) {
      if (i == pi || rel.at(i, pj).zero()) continue;
      P c = rel.at(i, pj);
      for (std::size_t j = 0; j < rel.cols(); ++j)
        rel.at(i, j) -= c * rel.at(pi, j);
    }
    Matrix<P> next(rel.rows() - 1, rel.cols() - 1);
    std::vector<long> ndeg;
    for (std::size_t i = 0, ii = 0; i < rel.rows(); ++i) {
      if (i == pi) continue;
      ndeg.push_back(deg[i]);
      for (std::size_t j = 0, jj = 0; j < rel.cols(); ++j) {
        if (j == pj) continue;
        next.at(ii, jj) = rel.at(i, j);
        ++jj;
      }
      ++ii;
    }
    rel = std::move(next);
    deg = std::move(ndeg);
  }
}

// Degree of a homogeneous column relative to ambient generator degrees.
template <class F>
long homogeneous_column_degree(const Matrix<Poly<F>>& m, std::size_t j,
                               const std::vector<long>& ambient_deg) {
  std::optional<long> d;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m.at(i, j).zero()) continue;
    if (!m.at(i, j).homogeneous())
      throw std::logic_error("resolution step produced an inhomogeneous entry");
    long cand = ambient_deg[i] + (long)m.at(i, j).degree();
    if (!d) d = cand;
    else if (*d != cand)
      throw std::logic_error("resolution step produced an inhomogeneous column");
  }
  return d ? *d : 0;
}

// Greedy minimal homogeneous generating set of the column span, lowest degree
// first; a column enters only if it is not already spanned.
template <class F>
std::pair<Matrix<Poly<F>>, std::vector<long>> minimal_columns(
    const RingCtx<Poly<F>>& ctx, const Matrix<Poly<F>>& m, const std::vector<long>& ambient_deg) {
  using P = Poly<F>;
  std::vector<std::size_t> order;
  std::vector<long> cdeg(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    bool zero = true;
    for (std::size_t i = 0; i < m.rows() && zero; ++i) zero = m.at(i, j).zero();
    if (zero) continue;
    cdeg[j] = homogeneous_column_degree(m, j, ambient_deg);
    order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cdeg[a] < cdeg[b]; });
  Matrix<P> kept(m.rows(), 0);
  std::vector<long> kept_deg;
  for (std::size_t j : order) {
    Matrix<P> col(m.rows(), 1);
    for (std::size_t i = 0; i < m.rows(); ++i) col.at(i, 0) = m.at(i, j);
    if (kept.cols() > 0 && span_contains(ctx, kept, col)) continue;
    kept = Matrix<P>::hstack(kept, col);
    kept_deg.push_back(cdeg[j]);
  }
  return {std::move(kept), std::move(kept_deg)};
}

template <class F>
bool pd_at_most_graded(const RingCtx<Poly<F>>& ctx, const PresentedModule<Poly<F>>& m, long p) {
  auto grading = infer_grading(m.rel);
  if (!grading)
    throw std::invalid_argument("pd_at_most: presentation is not graded");
  Matrix<Poly<F>> rel = m.rel;
  std::vector<long> deg = *grading;
  prune_presentation(rel, deg);
  if (p < 0) return rel.rows() == 0;
  if (rel.rows() == 0) return true;  // zero module
  auto [d1, d1deg] = minimal_columns(ctx, rel, deg);
  if (d1.cols() == 0) return true;  // free module, pd 0
  Matrix<Poly<F>> cur = d1;
  std::vector<long> cur_deg = d1deg;
  long length = 1;  // pd >= length while the current differential is nonzero
  const long cap = (long)ctx.nvars() + 1;
  while (true) {
    if (length > p) return false;
    Matrix<Poly<F>> ker = kernel_matrix(ctx, cur);
    auto [next, next_deg] = minimal_columns(ctx, ker, cur_deg);
    if (next.cols() == 0) return true;  // resolution ended: pd == length <= p
    ++length;
    if (length > cap)
      throw std::logic_error("pd_at_most: resolution exceeded the variable-count bound");
    cur = std::move(next);
    cur_deg = std::move(next_deg);
  }
}

}  // namespace detail

// Exact projective-dimension bound.  Fields: always 0.  Integers: via Smith
// invariants (free iff all invariants are units).  Polynomial rings: minimal
// graded free resolution; throws on ungraded input.
template <class R>
bool pd_at_most(const RingCtx<R>& ctx, const PresentedModule<R>& m, long p) {
  if constexpr (RingTraits<R>::is_field) {
    if (p < 0) return is_zero_module(ctx, m);
    return true;
  } else if constexpr (RingTraits<R>::is_polynomial) {
    return detail::pd_at_most_graded(ctx, m, p);
  } else {
    if (p < 0) return is_zero_module(ctx, m);
    if (p >= 1) return true;
    auto s = smith_normal_form(m.rel);
    for (const R& d : s.invariants)
      if (!euclid_is_unit(d)) return false;
    return true;
  }
}

}  // namespace koszulkit
