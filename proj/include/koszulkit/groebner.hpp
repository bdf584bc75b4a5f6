#pragma once

// Groebner bases for submodules of free modules R^n over a polynomial ring
// with field coefficients.  Ideals are the rank-one case, so a single engine
// serves membership, normal forms, lifts (explicit cofactors) and syzygies.
//
// Module terms are ordered term-over-position: monomials by the ring's order,
// ties broken toward the lower component index.  Buchberger runs with the
// coprimality criterion for ideals only (it is unsound for modules) and no
// chain criterion -- input sizes in this project never make that a cost --
// which keeps the S-pair bookkeeping simple enough to reuse directly for
// Schreyer syzygies: the zero reductions of all S-pairs of the reduced basis
// generate its syzygy module.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "koszulkit/matrix.hpp"
#include "koszulkit/polynomial.hpp"
#include "koszulkit/ring.hpp"

namespace koszulkit {

template <class F>
using MVec = std::vector<Poly<F>>;

template <class F>
struct ModTerm {
  Expo e;
  std::size_t idx = 0;
  F c = F(0);
};

inline int modterm_cmp(const Expo& e1, std::size_t i1, const Expo& e2, std::size_t i2, MonOrder ord) {
  int c = mon_cmp(e1, e2, ord);
  if (c != 0) return c;
  if (i1 != i2) return i1 < i2 ? 1 : -1;
  return 0;
}

template <class F>
std::optional<ModTerm<F>> lead_term(const MVec<F>& v, MonOrder ord) {
  std::optional<ModTerm<F>> best;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (const auto& t : v[i].terms()) {
      if (!best || modterm_cmp(t.e, i, best->e, best->idx, ord) > 0) best = ModTerm<F>{t.e, i, t.c};
    }
  }
  return best;
}

template <class F>
bool mvec_is_zero(const MVec<F>& v) {
  for (const auto& p : v)
    if (!p.zero()) return false;
  return true;
}

template <class F>
MVec<F> mvec_sub_scaled(MVec<F> a, const MVec<F>& b, const Expo& m, const F& c) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i].term_multiplied(m, c);
  return a;
}

template <class F>
struct DivisionResult {
  MVec<F> remainder;
  std::vector<Poly<F>> quotients;  // one per divisor; input = sum q_j * divisor_j + remainder
};

template <class F>
DivisionResult<F> module_divide(MVec<F> p, const std::vector<MVec<F>>& basis,
                                const std::vector<ModTerm<F>>& basis_lt, MonOrder ord) {
  DivisionResult<F> out;
  out.remainder.assign(p.size(), Poly<F>());
  out.quotients.assign(basis.size(), Poly<F>());
  while (auto lt = lead_term(p, ord)) {
    bool reduced = false;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto& blt = basis_lt[j];
      if (blt.idx == lt->idx && expo_divides(blt.e, lt->e)) {
        F c = lt->c / blt.c;
        Expo m = expo_div(lt->e, blt.e);
        p = mvec_sub_scaled(std::move(p), basis[j], m, c);
        out.quotients[j] += Poly<F>::monomial(m, c);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      auto term = Poly<F>::monomial(lt->e, lt->c);
      out.remainder[lt->idx] += term;
      p[lt->idx] -= term;
    }
  }
  return out;
}

// Reduced Groebner basis of the column span of `gens` inside R^rows, tracking
// each basis element as an explicit combination of the original columns.
template <class F>
class ModuleBasis {
public:
  using P = Poly<F>;

  ModuleBasis(const Matrix<P>& gens, MonOrder ord)
      : ord_(ord), ambient_(gens.rows()), ngens_(gens.cols()) {
    original_.reserve(gens.cols());
    for (std::size_t j = 0; j < gens.cols(); ++j) {
      MVec<F> col = gens.column(j);
      original_.push_back(col);
      if (mvec_is_zero(col)) continue;
      MVec<F> expr(ngens_, P());
      expr[j] = P(1);
      push_element(std::move(col), std::move(expr));
    }
    complete();
    interreduce();
  }

  MonOrder order() const { return ord_; }
  std::size_t ambient_rank() const { return ambient_; }
  std::size_t size() const { return elems_.size(); }
  const MVec<F>& element(std::size_t i) const { return elems_[i].g; }

  // Canonical reduced basis as matrix columns (sorted by decreasing lead term).
  Matrix<P> basis_matrix() const {
    Matrix<P> m(ambient_, elems_.size());
    for (std::size_t j = 0; j < elems_.size(); ++j)
      for (std::size_t i = 0; i < ambient_; ++i) m.at(i, j) = elems_[j].g[i];
    return m;
  }

  MVec<F> normal_form(const MVec<F>& v) const {
    return module_divide(v, raw_basis(), raw_lts(), ord_).remainder;
  }

  bool contains(const MVec<F>& v) const { return mvec_is_zero(normal_form(v)); }

  // X with gens * X = targets (columnwise), if every column lies in the span.
  std::optional<Matrix<P>> lift(const Matrix<P>& targets) const {
    if (targets.rows() != ambient_) throw std::invalid_argument("groebner: lift shape mismatch");
    Matrix<P> x(ngens_, targets.cols());
    for (std::size_t j = 0; j < targets.cols(); ++j) {
      auto dr = module_divide(targets.column(j), raw_basis(), raw_lts(), ord_);
      if (!mvec_is_zero(dr.remainder)) return std::nullopt;
      // column = sum_s q_s * elems_[s], elems_[s] = sum_i expr[s][i] * gen_i
      for (std::size_t s = 0; s < elems_.size(); ++s) {
        if (dr.quotients[s].zero()) continue;
        for (std::size_t i = 0; i < ngens_; ++i)
          x.at(i, j) += dr.quotients[s] * elems_[s].expr[i];
      }
    }
    return x;
  }

  // Columns generate the syzygy module {c in R^ngens : gens * c = 0}.
  Matrix<P> kernel() const {
    // Schreyer generators for the reduced basis H.
    std::vector<MVec<F>> syzH;
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      for (std::size_t j = i + 1; j < elems_.size(); ++j) {
        if (elems_[i].lt.idx != elems_[j].lt.idx) continue;
        Expo l = expo_lcm(elems_[i].lt.e, elems_[j].lt.e);
        Expo mi = expo_div(l, elems_[i].lt.e);
        Expo mj = expo_div(l, elems_[j].lt.e);
        F ci = F(1) / elems_[i].lt.c;
        F cj = F(1) / elems_[j].lt.c;
        MVec<F> s(ambient_, P());
        for (std::size_t k = 0; k < ambient_; ++k)
          s[k] = elems_[i].g[k].term_multiplied(mi, ci) - elems_[j].g[k].term_multiplied(mj, cj);
        auto dr = module_divide(std::move(s), raw_basis(), raw_lts(), ord_);
        if (!mvec_is_zero(dr.remainder))
          throw std::logic_error("groebner: S-pair of a Groebner basis did not reduce to zero");
        MVec<F> syz(elems_.size(), P());
        syz[i] += P::monomial(mi, ci);
        syz[j] -= P::monomial(mj, cj);
        for (std::size_t k = 0; k < elems_.size(); ++k) syz[k] -= dr.quotients[k];
        if (!mvec_is_zero(syz)) syzH.push_back(std::move(syz));
      }
    }
    // Convert: Syz(G) is generated by the columns of I - A*B together with
    // A * Syz(H), where H = G*A and G = H*B.
    std::vector<MVec<F>> out;
    for (std::size_t j = 0; j < ngens_; ++j) {
      // column j of I - A*B: e_j minus the tracked expression of gen_j's
      // division by H.
      MVec<F> col(ngens_, P());
      col[j] = P(1);
      auto dr = module_divide(gen_column(j), raw_basis(), raw_lts(), ord_);
      if (!mvec_is_zero(dr.remainder))
        throw std::logic_error("groebner: generator did not reduce against its own basis");
      for (std::size_t s = 0; s < elems_.size(); ++s) {
        if (dr.quotients[s].zero()) continue;
        for (std::size_t i = 0; i < ngens_; ++i)
          col[i] -= dr.quotients[s] * elems_[s].expr[i];
      }
      if (!mvec_is_zero(col)) out.push_back(std::move(col));
    }
    for (const auto& s : syzH) {
      MVec<F> col(ngens_, P());
      for (std::size_t k = 0; k < elems_.size(); ++k) {
        if (s[k].zero()) continue;
        for (std::size_t i = 0; i < ngens_; ++i) col[i] += s[k] * elems_[k].expr[i];
      }
      if (!mvec_is_zero(col)) out.push_back(std::move(col));
    }
    Matrix<P> m(ngens_, out.size());
    for (std::size_t j = 0; j < out.size(); ++j)
      for (std::size_t i = 0; i < ngens_; ++i) m.at(i, j) = out[j][i];
    return m;
  }

private:
  struct Elem {
    MVec<F> g;
    MVec<F> expr;  // g = sum expr[i] * gen_i
    ModTerm<F> lt;
  };

  // The original generator column j needs re-deriving from tracked data; we
  // keep it by storing gens implicitly: gen_j = sum over elems of nothing --
  // instead stash the original columns on construction.
  MVec<F> gen_column(std::size_t j) const { return original_[j]; }

  std::vector<MVec<F>> raw_basis() const {
    std::vector<MVec<F>> b;
    b.reserve(elems_.size());
    for (const auto& e : elems_) b.push_back(e.g);
    return b;
  }
  std::vector<ModTerm<F>> raw_lts() const {
    std::vector<ModTerm<F>> b;
    b.reserve(elems_.size());
    for (const auto& e : elems_) b.push_back(e.lt);
    return b;
  }

  void push_element(MVec<F> g, MVec<F> expr) {
    auto lt = lead_term(g, ord_);
    for (std::size_t i = 0; i < elems_.size(); ++i) pairs_.push_back({i, elems_.size()});
    elems_.push_back(Elem{std::move(g), std::move(expr), *lt});
  }

  void complete() {
    // deterministic normal strategy: smallest lcm degree first
    while (!pairs_.empty()) {
      std::size_t pick = 0;
      unsigned best = 0;
      bool have = false;
      for (std::size_t k = 0; k < pairs_.size(); ++k) {
        auto [i, j] = pairs_[k];
        if (elems_[i].lt.idx != elems_[j].lt.idx) continue;
        unsigned d = total_degree(expo_lcm(elems_[i].lt.e, elems_[j].lt.e));
        if (!have || d < best) {
          best = d;
          pick = k;
          have = true;
        }
      }
      if (!have) {
        pairs_.clear();
        break;
      }
      auto [i, j] = pairs_[pick];
      pairs_.erase(pairs_.begin() + (long)pick);
      if (ambient_ <= 1 && expo_trim(expo_mul(elems_[i].lt.e, elems_[j].lt.e)) ==
                               expo_lcm(elems_[i].lt.e, elems_[j].lt.e)) {
        continue;  // coprime lead monomials: ideal case only
      }
      Expo l = expo_lcm(elems_[i].lt.e, elems_[j].lt.e);
      Expo mi = expo_div(l, elems_[i].lt.e);
      Expo mj = expo_div(l, elems_[j].lt.e);
      F ci = F(1) / elems_[i].lt.c;
      F cj = F(1) / elems_[j].lt.c;
      MVec<F> s(ambient_, P());
      MVec<F> sexpr(ngens_, P());
      for (std::size_t k = 0; k < ambient_; ++k)
        s[k] = elems_[i].g[k].term_multiplied(mi, ci) - elems_[j].g[k].term_multiplied(mj, cj);
      for (std::size_t k = 0; k < ngens_; ++k)
        sexpr[k] = elems_[i].expr[k].term_multiplied(mi, ci) - elems_[j].expr[k].term_multiplied(mj, cj);
      auto dr = module_divide(std::move(s), raw_basis(), raw_lts(), ord_);
      if (mvec_is_zero(dr.remainder)) continue;
      for (std::size_t k = 0; k < elems_.size(); ++k) {
        if (dr.quotients[k].zero()) continue;
        for (std::size_t g = 0; g < ngens_; ++g) sexpr[g] -= dr.quotients[k] * elems_[k].expr[g];
      }
      push_element(std::move(dr.remainder), std::move(sexpr));
    }
  }

  void interreduce() {
    // drop elements whose lead term is divisible by another's
    std::vector<bool> keep(elems_.size(), true);
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (!keep[i]) continue;
      for (std::size_t j = 0; j < elems_.size(); ++j) {
        if (i == j || !keep[j] || !keep[i]) continue;
        if (elems_[j].lt.idx == elems_[i].lt.idx && expo_divides(elems_[j].lt.e, elems_[i].lt.e)) {
          if (elems_[j].lt.e == elems_[i].lt.e && j > i) continue;  // keep the earlier of equal leads
          keep[i] = false;
        }
      }
    }
    std::vector<Elem> kept;
    for (std::size_t i = 0; i < elems_.size(); ++i)
      if (keep[i]) kept.push_back(std::move(elems_[i]));
    elems_ = std::move(kept);
    // tail-reduce each against the others and normalize to monic
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      std::vector<MVec<F>> others;
      std::vector<ModTerm<F>> olts;
      std::vector<std::size_t> omap;
      for (std::size_t j = 0; j < elems_.size(); ++j) {
        if (j == i) continue;
        others.push_back(elems_[j].g);
        olts.push_back(elems_[j].lt);
        omap.push_back(j);
      }
      auto dr = module_divide(elems_[i].g, others, olts, ord_);
      elems_[i].g = std::move(dr.remainder);
      for (std::size_t k = 0; k < others.size(); ++k) {
        if (dr.quotients[k].zero()) continue;
        for (std::size_t g = 0; g < ngens_; ++g)
          elems_[i].expr[g] -= dr.quotients[k] * elems_[omap[k]].expr[g];
      }
      F inv = F(1) / elems_[i].lt.c;
      for (auto& p : elems_[i].g) p = p.scaled(inv);
      for (auto& p : elems_[i].expr) p = p.scaled(inv);
      elems_[i].lt = *lead_term(elems_[i].g, ord_);
    }
    std::sort(elems_.begin(), elems_.end(), [&](const Elem& a, const Elem& b) {
      return modterm_cmp(a.lt.e, a.lt.idx, b.lt.e, b.lt.idx, ord_) > 0;
    });
  }

  MonOrder ord_;
  std::size_t ambient_;
  std::size_t ngens_;
  std::vector<Elem> elems_;
  std::vector<MVec<F>> original_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

// --- ideal-level conveniences ------------------------------------------------

template <class F>
Matrix<Poly<F>> polys_as_matrix(const std::vector<Poly<F>>& gens) {
  Matrix<Poly<F>> m(1, gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) m.at(0, j) = gens[j];
  return m;
}

// Reduced Groebner basis of an ideal, canonical for the order.
template <class F>
std::vector<Poly<F>> groebner_basis(const std::vector<Poly<F>>& gens, MonOrder ord) {
  ModuleBasis<F> b(polys_as_matrix(gens), ord);
  std::vector<Poly<F>> out;
  for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b.element(i)[0]);
  return out;
}

template <class F>
Poly<F> normal_form(const Poly<F>& f, const std::vector<Poly<F>>& basis, MonOrder ord) {
  ModuleBasis<F> b(polys_as_matrix(basis), ord);
  return b.normal_form(MVec<F>{f})[0];
}

template <class F>
bool ideal_membership(const Poly<F>& f, const std::vector<Poly<F>>& gens, MonOrder ord) {
  ModuleBasis<F> b(polys_as_matrix(gens), ord);
  return b.contains(MVec<F>{f});
}

template <class F>
bool is_unit_ideal(const std::vector<Poly<F>>& gens, MonOrder ord) {
  auto basis = groebner_basis(gens, ord);
  return basis.size() == 1 && basis[0].constant() && !basis[0].zero();
}

// f in the radical of I, by the extended-ring trick: 1 in I + (1 - t f).
template <class F>
bool radical_membership(const Poly<F>& f, const std::vector<Poly<F>>& gens,
                        const RingCtx<Poly<F>>& ring) {
  std::size_t t = ring.nvars();
  std::vector<Poly<F>> ext(gens);
  Expo te(t + 1, 0);
  te[t] = 1;
  ext.push_back(Poly<F>(1) - f.term_multiplied(te, F(1)));
  return is_unit_ideal(ext, ring.order);
}

// Generators of the colon ideal (J : f), via the f-components of the syzygies
// of [f | gens of J].
template <class F>
std::vector<Poly<F>> colon_ideal(const std::vector<Poly<F>>& J, const Poly<F>& f, MonOrder ord) {
  std::vector<Poly<F>> cols;
  cols.push_back(f);
  cols.insert(cols.end(), J.begin(), J.end());
  ModuleBasis<F> b(polys_as_matrix(cols), ord);
  Matrix<Poly<F>> syz = b.kernel();
  std::vector<Poly<F>> out;
  for (std::size_t j = 0; j < syz.cols(); ++j)
    if (!syz.at(0, j).zero()) out.push_back(syz.at(0, j));
  return out;
}

// f is a nonzerodivisor on A/J exactly when (J : f) = J; the inclusion
// J <= (J : f) always holds, so only the reverse needs testing.
template <class F>
bool is_nonzerodivisor_mod(const Poly<F>& f, const std::vector<Poly<F>>& J, MonOrder ord) {
  std::vector<Poly<F>> colon = colon_ideal(J, f, ord);
  if (colon.empty()) return true;
  ModuleBasis<F> b(polys_as_matrix(J), ord);
  for (const auto& g : colon)
    if (!b.contains(MVec<F>{g})) return false;
  return true;
}

// Regular sequence test: the generated ideal must be proper and every
// permutation (lengths up to 4; longer inputs are rejected) must consist of
// successive nonzerodivisors, decided by the colon-ideal criterion.
template <class F>
bool is_regular_sequence(const std::vector<Poly<F>>& fs, MonOrder ord) {
  if (fs.empty()) throw std::invalid_argument("is_regular_sequence: empty sequence");
  if (fs.size() > 4)
    throw std::invalid_argument("is_regular_sequence: sequences longer than 4 are not supported");
  if (is_unit_ideal(fs, ord)) return false;
  std::vector<std::size_t> perm(fs.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  do {
    std::vector<Poly<F>> head;
    for (std::size_t i : perm) {
      if (!is_nonzerodivisor_mod(fs[i], head, ord)) return false;
      head.push_back(fs[i]);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return true;
}

}  // namespace koszulkit
