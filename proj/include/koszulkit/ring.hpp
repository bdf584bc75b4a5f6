#pragma once

// Runtime ring descriptors and the static ring contexts they dispatch to.
//
// The engine supports five concrete scalar types:
//   Int        -- the integers (Euclidean-domain paths: Hermite/Smith)
//   Rat        -- the rationals (field paths)
//   Fp         -- prime fields with runtime modulus (field paths)
//   Poly<Rat>  -- multivariate polynomials over the rationals (Groebner paths)
//   Poly<Fp>   -- multivariate polynomials over a prime field (Groebner paths)
//
// A RingCtx<R> carries the runtime data needed to print, parse and compute
// with scalars of type R; with_ring() converts a descriptor into a call on the
// matching static context.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "koszulkit/numeric.hpp"
#include "koszulkit/polynomial.hpp"

namespace koszulkit {

template <class R>
struct RingCtx;

template <>
struct RingCtx<Int> {
  bool operator==(const RingCtx&) const { return true; }
  std::string to_string() const { return "integers"; }
  Int parse_scalar(const std::string& s) const { return Int(s); }
  std::string print_scalar(const Int& v) const { return scalar_to_string(v); }
};

template <>
struct RingCtx<Rat> {
  bool operator==(const RingCtx&) const { return true; }
  std::string to_string() const { return "rationals"; }
  Rat parse_scalar(const std::string& s) const {
    Rat r(s);
    r.canonicalize();
    return r;
  }
  std::string print_scalar(const Rat& v) const { return scalar_to_string(v); }
};

template <>
struct RingCtx<Fp> {
  std::uint64_t p = 0;
  bool operator==(const RingCtx& o) const { return p == o.p; }
  std::string to_string() const { return "prime-field " + std::to_string(p); }
  Fp parse_scalar(const std::string& s) const { return Fp(std::stoll(s), p); }
  std::string print_scalar(const Fp& v) const { return std::to_string(Fp(v.rep(), p).rep()); }
};

template <class F>
struct RingCtx<Poly<F>> {
  RingCtx<F> base;
  std::vector<std::string> vars;
  MonOrder order = MonOrder::grevlex;

  bool operator==(const RingCtx& o) const {
    return base == o.base && vars == o.vars && order == o.order;
  }
  std::string to_string() const {
    std::string s = "polynomial " + base.to_string() + " vars";
    for (const auto& v : vars) s += " " + v;
    s += " order " + mon_order_to_string(order);
    return s;
  }
  Poly<F> parse_scalar(const std::string& s) const { return poly_parse<F>(s, vars); }
  std::string print_scalar(const Poly<F>& v) const { return poly_to_string(v, vars, order); }

  Poly<F> variable(std::size_t i) const { return Poly<F>::variable(i, bind_one()); }
  std::size_t nvars() const { return vars.size(); }
  // Extend by a fresh auxiliary variable appended after the declared ones.
  RingCtx extended(const std::string& fresh) const {
    RingCtx e(*this);
    e.vars.push_back(fresh);
    return e;
  }

private:
  F bind_one() const;
};

template <>
inline Rat RingCtx<Poly<Rat>>::bind_one() const { return Rat(1); }
template <>
inline Fp RingCtx<Poly<Fp>>::bind_one() const { return Fp(1, base.p); }

using PolyQ = Poly<Rat>;
using PolyFp = Poly<Fp>;
using RingQ = RingCtx<Rat>;
using RingZ = RingCtx<Int>;

// Small-integer embedding, used by the random generators; the Fp overload
// binds the modulus immediately so no wildcard literals escape.
inline Int scalar_from_long(const RingCtx<Int>&, long v) { return Int(v); }
inline Rat scalar_from_long(const RingCtx<Rat>&, long v) { return Rat(v); }
inline Fp scalar_from_long(const RingCtx<Fp>& c, long v) { return Fp(v, c.p); }
template <class F>
Poly<F> scalar_from_long(const RingCtx<Poly<F>>& c, long v) {
  return Poly<F>(scalar_from_long(c.base, v));
}

// --- ring classification traits --------------------------------------------

template <class R>
struct RingTraits;

template <>
struct RingTraits<Int> {
  static constexpr bool is_field = false;
  static constexpr bool is_polynomial = false;
  static constexpr bool is_euclidean = true;
};
template <>
struct RingTraits<Rat> {
  static constexpr bool is_field = true;
  static constexpr bool is_polynomial = false;
  static constexpr bool is_euclidean = true;
};
template <>
struct RingTraits<Fp> {
  static constexpr bool is_field = true;
  static constexpr bool is_polynomial = false;
  static constexpr bool is_euclidean = true;
};
template <class F>
struct RingTraits<Poly<F>> {
  static constexpr bool is_field = false;
  static constexpr bool is_polynomial = true;
  static constexpr bool is_euclidean = false;  // univariate handled separately
};

// --- runtime descriptor ------------------------------------------------------

struct RingDescriptor {
  enum class Kind { integers, rationals, prime_field, polynomial };
  Kind kind = Kind::rationals;
  std::uint64_t p = 0;              // prime for prime_field, or the polynomial base field
  bool base_is_rationals = true;    // for polynomial rings
  std::vector<std::string> vars;    // for polynomial rings
  MonOrder order = MonOrder::grevlex;

  void validate() const {
    if (kind == Kind::prime_field || (kind == Kind::polynomial && !base_is_rationals)) {
      if (!is_prime_u64(p)) throw std::invalid_argument("ring: modulus " + std::to_string(p) + " is not prime");
    }
    if (kind == Kind::polynomial) {
      if (vars.empty()) throw std::invalid_argument("ring: polynomial ring needs at least one variable");
      for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
          if (vars[i] == vars[j]) throw std::invalid_argument("ring: duplicate variable '" + vars[i] + "'");
    }
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::integers: return "integers";
      case Kind::rationals: return "rationals";
      case Kind::prime_field: return "prime-field " + std::to_string(p);
      case Kind::polynomial: {
        std::string s = "polynomial ";
        s += base_is_rationals ? "rationals" : ("prime-field " + std::to_string(p));
        s += " vars";
        for (const auto& v : vars) s += " " + v;
        s += " order " + mon_order_to_string(order);
        return s;
      }
    }
    return "";
  }
};

// Calls fn with the static ring context matching the descriptor.
template <class Fn>
decltype(auto) with_ring(const RingDescriptor& d, Fn&& fn) {
  d.validate();
  switch (d.kind) {
    case RingDescriptor::Kind::integers:
      return fn(RingCtx<Int>{});
    case RingDescriptor::Kind::rationals:
      return fn(RingCtx<Rat>{});
    case RingDescriptor::Kind::prime_field:
      return fn(RingCtx<Fp>{d.p});
    case RingDescriptor::Kind::polynomial:
      if (d.base_is_rationals) {
        return fn(RingCtx<PolyQ>{RingCtx<Rat>{}, d.vars, d.order});
      } else {
        return fn(RingCtx<PolyFp>{RingCtx<Fp>{d.p}, d.vars, d.order});
      }
  }
  throw std::logic_error("unreachable ring kind");
}

}  // namespace koszulkit
