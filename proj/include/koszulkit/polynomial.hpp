#pragma once

// Sparse multivariate polynomials over an exact field, with the monomial
// orders used by the Groebner engine and a canonical text form.
//
// Exponent vectors are stored trimmed (no trailing zeros), so a polynomial is
// independent of the ambient variable count; orders pad implicitly.  Terms are
// kept sorted under a fixed structural order (grevlex with index tiebreak), so
// equality is plain memberwise comparison and serialization is canonical.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "koszulkit/numeric.hpp"

namespace koszulkit {

using Expo = std::vector<unsigned>;

inline unsigned total_degree(const Expo& e) {
  unsigned d = 0;
  for (unsigned x : e) d += x;
  return d;
}

inline Expo expo_trim(Expo e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
  return e;
}

inline Expo expo_mul(const Expo& a, const Expo& b) {
  Expo r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline bool expo_divides(const Expo& a, const Expo& b) {  // a | b
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > (i < b.size() ? b[i] : 0u)) return false;
  return true;
}

inline Expo expo_div(const Expo& b, const Expo& a) {  // b / a, assumes a | b
  Expo r(b);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] -= a[i];
  return expo_trim(r);
}

inline Expo expo_lcm(const Expo& a, const Expo& b) {
  Expo r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    unsigned x = i < a.size() ? a[i] : 0u;
    unsigned y = i < b.size() ? b[i] : 0u;
    r[i] = std::max(x, y);
  }
  return expo_trim(r);
}

enum class MonOrder { grevlex, grlex, lex };

// Returns +1 if a > b, 0 if equal, -1 if a < b under the given order.
inline int mon_cmp(const Expo& a, const Expo& b, MonOrder ord) {
  std::size_t n = std::max(a.size(), b.size());
  auto at = [](const Expo& e, std::size_t i) { return i < e.size() ? e[i] : 0u; };
  if (ord != MonOrder::lex) {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db ? 1 : -1;
  }
  if (ord == MonOrder::grevlex) {
    for (std::size_t i = n; i-- > 0;) {
      unsigned x = at(a, i), y = at(b, i);
      if (x != y) return x < y ? 1 : -1;
    }
    return 0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    unsigned x = at(a, i), y = at(b, i);
    if (x != y) return x > y ? 1 : -1;
  }
  return 0;
}

inline MonOrder mon_order_from_string(const std::string& s) {
  if (s == "grevlex") return MonOrder::grevlex;
  if (s == "grlex") return MonOrder::grlex;
  if (s == "lex") return MonOrder::lex;
  throw std::invalid_argument("unknown monomial order: " + s);
}

inline std::string mon_order_to_string(MonOrder o) {
  switch (o) {
    case MonOrder::grevlex: return "grevlex";
    case MonOrder::grlex: return "grlex";
    case MonOrder::lex: return "lex";
  }
  return "grevlex";
}

template <class F>
class Poly {
public:
  struct Term {
    Expo e;
    F c;
    bool operator==(const Term& o) const { return e == o.e && c == o.c; }
  };

  Poly() = default;
  Poly(long v) {
    F c(v);
    if (!is_zero(c)) terms_.push_back(Term{Expo{}, c});
  }
  explicit Poly(const F& c) {
    if (!is_zero(c)) terms_.push_back(Term{Expo{}, c});
  }
  static Poly variable(std::size_t i, const F& one_coeff = F(1)) {
    Poly p;
    if (is_zero(one_coeff)) return p;
    Expo e(i + 1, 0);
    e[i] = 1;
    p.terms_.push_back(Term{std::move(e), one_coeff});
    return p;
  }
  static Poly monomial(Expo e, const F& c) {
    Poly p;
    if (!is_zero(c)) p.terms_.push_back(Term{expo_trim(std::move(e)), c});
    return p;
  }
  static Poly from_terms(std::vector<Term> ts) {
    Poly p;
    for (auto& t : ts) {
      t.e = expo_trim(std::move(t.e));
      p.terms_.push_back(std::move(t));
    }
    p.normalize();
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool zero() const { return terms_.empty(); }
  bool constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].e.empty()); }
  unsigned degree() const {  // total degree; 0 for the zero polynomial
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, total_degree(t.e));
    return d;
  }
  std::size_t max_var() const {  // 1 + largest variable index used
    std::size_t n = 0;
    for (const auto& t : terms_) n = std::max(n, t.e.size());
    return n;
  }
  // All terms share one total degree (true for 0).
  bool homogeneous() const {
    for (const auto& t : terms_)
      if (total_degree(t.e) != total_degree(terms_[0].e)) return false;
    return true;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.terms_ = merge(a.terms_, b.terms_, false);
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly r;
    r.terms_ = merge(a.terms_, b.terms_, true);
    return r;
  }
  Poly operator-() const {
    Poly r(*this);
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_)
        r.terms_.push_back(Term{expo_mul(s.e, t.e), s.c * t.c});
    r.normalize();
    return r;
  }
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  Poly scaled(const F& c) const {
    Poly r;
    if (is_zero(c)) return r;
    r.terms_ = terms_;
    for (auto& t : r.terms_) t.c = t.c * c;
    return r;
  }
  Poly term_multiplied(const Expo& e, const F& c) const {
    Poly r;
    if (is_zero(c)) return r;
    for (const auto& t : terms_) r.terms_.push_back(Term{expo_mul(t.e, e), t.c * c});
    // multiplying by a monomial preserves strict ordering of exponents
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly pow(unsigned n) const {
    Poly r(1);
    Poly base(*this);
    while (n) {
      if (n & 1) r *= base;
      base *= base;
      n >>= 1;
    }
    return r;
  }

  // Shift every variable index up by `k` (used to embed R into R[t] with the
  // new variables in front) -- or append: here t is appended, so embedding is
  // the identity; this helper instead renames x_i to x_{i+k}.
  Poly shifted_vars(std::size_t k) const {
    Poly r;
    for (const auto& t : terms_) {
      Expo e(t.e.size() + k, 0);
      for (std::size_t i = 0; i < t.e.size(); ++i) e[i + k] = t.e[i];
      r.terms_.push_back(Term{expo_trim(std::move(e)), t.c});
    }
    r.normalize();
    return r;
  }

private:
  // storage order: fixed structural grevlex, largest first
  static bool term_before(const Term& x, const Term& y) {
    return mon_cmp(x.e, y.e, MonOrder::grevlex) > 0;
  }
  void normalize() {
    std::sort(terms_.begin(), terms_.end(), term_before);
    std::vector<Term> out;
    for (auto& t : terms_) {
      if (!out.empty() && out.back().e == t.e) {
        out.back().c += t.c;
        if (is_zero(out.back().c)) out.pop_back();
      } else if (!is_zero(t.c)) {
        out.push_back(std::move(t));
      }
    }
    terms_ = std::move(out);
  }
  static std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool sub) {
    std::vector<Term> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && term_before(a[i], b[j]))) {
        out.push_back(a[i++]);
      } else if (i == a.size() || term_before(b[j], a[i])) {
        Term t = b[j++];
        if (sub) t.c = -t.c;
        out.push_back(std::move(t));
      } else {
        F c = a[i].c;
        if (sub) c -= b[j].c; else c += b[j].c;
        if (!is_zero(c)) out.push_back(Term{a[i].e, c});
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::vector<Term> terms_;
};

template <class F>
inline bool is_zero(const Poly<F>& p) { return p.zero(); }
template <class F>
inline bool is_one(const Poly<F>& p) {
  return p.terms().size() == 1 && p.terms()[0].e.empty() && is_one(p.terms()[0].c);
}

// --- text form --------------------------------------------------------------
//
// Canonical printing: terms in descending order of the ring's monomial order,
// coefficient first (omitted when 1 and a variable follows), '*' between
// factors, '^' for exponents greater than one.  Example: 3*x^2*y - 1/2.

template <class F>
std::string poly_to_string(const Poly<F>& p, const std::vector<std::string>& vars, MonOrder ord) {
  if (p.zero()) return "0";
  std::vector<typename Poly<F>::Term> ts(p.terms().begin(), p.terms().end());
  std::stable_sort(ts.begin(), ts.end(), [&](const auto& a, const auto& b) {
    return mon_cmp(a.e, b.e, ord) > 0;
  });
  std::string out;
  bool first = true;
  for (const auto& t : ts) {
    std::string cs = scalar_to_string(t.c);
    bool neg = !cs.empty() && cs[0] == '-';
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (neg) cs = cs.substr(1);
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < t.e.size(); ++i) {
      if (t.e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      if (i >= vars.size()) throw std::invalid_argument("polynomial uses an undeclared variable");
      mono += vars[i];
      if (t.e[i] > 1) mono += "^" + std::to_string(t.e[i]);
    }
    if (mono.empty()) {
      out += cs;
    } else if (cs == "1") {
      out += mono;
    } else {
      out += cs + "*" + mono;
    }
  }
  return out;
}

namespace detail {

struct PolyLexer {
  const std::string& s;
  std::size_t pos = 0;
  explicit PolyLexer(const std::string& str) : s(str) {}
  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  std::string integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
    if (start == pos) throw std::invalid_argument("polynomial parse error: expected a number at column " + std::to_string(pos + 1));
    return s.substr(start, pos - start);
  }
  std::string identifier() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum((unsigned char)s[pos]) || s[pos] == '_')) ++pos;
    if (start == pos || std::isdigit((unsigned char)s[start]))
      throw std::invalid_argument("polynomial parse error: expected an identifier at column " + std::to_string(pos + 1));
    return s.substr(start, pos - start);
  }
};

inline Rat rat_from_parts(const std::string& num, const std::string& den) {
  Rat r(num + (den.empty() ? "" : "/" + den));
  r.canonicalize();
  return r;
}

template <class F>
F coeff_from_parts(const std::string& num, const std::string& den);

template <>
inline Rat coeff_from_parts<Rat>(const std::string& num, const std::string& den) {
  return rat_from_parts(num, den);
}
template <>
inline Fp coeff_from_parts<Fp>(const std::string& num, const std::string& den) {
  if (!den.empty()) throw std::invalid_argument("prime-field coefficients must be integers");
  return Fp(std::stoll(num));
}

}  // namespace detail

// Parses the grammar produced by poly_to_string: sums/differences of terms,
// each term a '*'-separated product of a rational/integer literal and
// variable powers.
template <class F>
Poly<F> poly_parse(const std::string& text, const std::vector<std::string>& vars) {
  detail::PolyLexer lx(text);
  auto var_index = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) return i;
    throw std::invalid_argument("unknown variable '" + name + "'");
  };
  Poly<F> result;
  bool first = true;
  while (true) {
    lx.skip_ws();
    if (lx.pos >= lx.s.size()) {
      if (first) throw std::invalid_argument("polynomial parse error: empty input");
      break;
    }
    bool neg = false;
    if (!first) {
      if (lx.eat('+')) {
        neg = false;
      } else if (lx.eat('-')) {
        neg = true;
      } else {
        throw std::invalid_argument("polynomial parse error: expected '+' or '-' at column " + std::to_string(lx.pos + 1));
      }
    } else if (lx.eat('-')) {
      neg = true;
    }
    first = false;
    // one term: factors separated by '*'
    F coeff(1);
    Expo e;
    bool saw_factor = false;
    while (true) {
      char c = lx.peek();
      if (std::isdigit((unsigned char)c)) {
        std::string num = lx.integer();
        std::string den;
        if (lx.eat('/')) den = lx.integer();
        coeff = coeff * detail::coeff_from_parts<F>(num, den);
        saw_factor = true;
      } else if (std::isalpha((unsigned char)c) || c == '_') {
        std::size_t vi = var_index(lx.identifier());
        unsigned pw = 1;
        if (lx.eat('^')) pw = (unsigned)std::stoul(lx.integer());
        if (e.size() <= vi) e.resize(vi + 1, 0);
        e[vi] += pw;
        saw_factor = true;
      } else {
        throw std::invalid_argument("polynomial parse error: expected a factor at column " + std::to_string(lx.pos + 1));
      }
      if (!lx.eat('*')) break;
    }
    if (!saw_factor) throw std::invalid_argument("polynomial parse error: empty term");
    if (neg) coeff = -coeff;
    result += Poly<F>::monomial(std::move(e), coeff);
  }
  return result;
}

}  // namespace koszulkit
