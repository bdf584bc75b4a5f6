#pragma once

// Exact scalar arithmetic: arbitrary-precision integers and rationals (GMP)
// and prime fields with a runtime modulus.  These are the coefficient types
// everything else is templated on.

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace koszulkit {

using Int = mpz_class;
using Rat = mpq_class;

// An element of F_p for a runtime prime p, or an unbound integer literal.
//
// Generic code needs to write R(0), R(1), R(-3) without access to a modulus;
// such literals carry p == 0 and bind to the modulus of the first bound
// operand they meet.  Arithmetic between two literals stays literal.
class Fp {
public:
  Fp() : v_(0), p_(0) {}
  Fp(long v) : v_(v), p_(0) {}
  Fp(std::int64_t v, std::uint64_t p) : v_(v), p_(p) { reduce(); }

  std::uint64_t modulus() const { return p_; }
  // Canonical representative in [0, p); literals report their raw value.
  std::int64_t rep() const { return v_; }
  bool is_literal() const { return p_ == 0; }

  friend Fp operator+(const Fp& a, const Fp& b) {
    std::uint64_t p = common_modulus(a, b);
    if (p == 0) return Fp(a.v_ + b.v_);
    __int128 s = (__int128)canon(a.v_, p) + canon(b.v_, p);
    return Fp((std::int64_t)(s % (__int128)p), p);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    std::uint64_t p = common_modulus(a, b);
    if (p == 0) return Fp(a.v_ - b.v_);
    __int128 s = (__int128)canon(a.v_, p) - canon(b.v_, p) + (__int128)p;
    return Fp((std::int64_t)(s % (__int128)p), p);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    std::uint64_t p = common_modulus(a, b);
    if (p == 0) return Fp(a.v_ * b.v_);
    unsigned __int128 prod =
        (unsigned __int128)(std::uint64_t)canon(a.v_, p) * (std::uint64_t)canon(b.v_, p);
    return Fp((std::int64_t)(prod % p), p);
  }
  Fp operator-() const {
    if (p_ == 0) return Fp(-v_);
    return Fp(-v_, p_);
  }
  Fp inverse() const {
    if (p_ == 0) {
      if (v_ == 1) return Fp(1);
      if (v_ == -1) return Fp(-1);
      throw std::domain_error("Fp: cannot invert an unbound literal");
    }
    if (v_ == 0) throw std::domain_error("Fp: division by zero");
    // extended Euclid on (v, p)
    std::int64_t t = 0, newt = 1;
    std::int64_t r = (std::int64_t)p_, newr = v_;
    while (newr != 0) {
      std::int64_t q = r / newr;
      std::int64_t tmp = t - q * newt;
      t = newt; newt = tmp;
      tmp = r - q * newr;
      r = newr; newr = tmp;
    }
    if (r != 1) throw std::domain_error("Fp: modulus is not prime");
    return Fp(t, p_);
  }
  friend Fp operator/(const Fp& a, const Fp& b) {
    std::uint64_t p = common_modulus(a, b);
    if (p == 0) {
      if (b.v_ == 0) throw std::domain_error("Fp: division by zero");
      if (a.v_ % b.v_ != 0) throw std::domain_error("Fp: literal division is not exact");
      return Fp(a.v_ / b.v_);
    }
    return Fp(a.v_, p) * Fp(b.v_, p).inverse();
  }
  Fp& operator+=(const Fp& b) { return *this = *this + b; }
  Fp& operator-=(const Fp& b) { return *this = *this - b; }
  Fp& operator*=(const Fp& b) { return *this = *this * b; }
  Fp& operator/=(const Fp& b) { return *this = *this / b; }

  friend bool operator==(const Fp& a, const Fp& b) {
    std::uint64_t p = common_modulus(a, b);
    if (p == 0) return a.v_ == b.v_;
    return canon(a.v_, p) == canon(b.v_, p);
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

private:
  static std::uint64_t common_modulus(const Fp& a, const Fp& b) {
    if (a.p_ != 0 && b.p_ != 0 && a.p_ != b.p_)
      throw std::invalid_argument("Fp: modulus mismatch");
    return a.p_ != 0 ? a.p_ : b.p_;
  }
  static std::int64_t canon(std::int64_t v, std::uint64_t p) {
    std::int64_t m = (std::int64_t)p;
    v %= m;
    if (v < 0) v += m;
    return v;
  }
  void reduce() {
    if (p_ == 0) return;
    std::int64_t m = (std::int64_t)p_;
    v_ %= m;
    if (v_ < 0) v_ += m;
  }
  std::int64_t v_;
  std::uint64_t p_;
};

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull}) {
    if (n == d) return true;
    if (n % d == 0) return false;
  }
  // deterministic Miller-Rabin for 64-bit inputs
  auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return (std::uint64_t)((unsigned __int128)a * b % m);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e) {
      if (e & 1) r = mulmod(r, a, m);
      a = mulmod(a, a, m);
      e >>= 1;
    }
    return r;
  };
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i < s - 1 && witness; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) witness = false;
    }
    if (witness) return false;
  }
  return true;
}

// --- uniform scalar helpers -------------------------------------------------

inline bool is_zero(const Int& a) { return sgn(a) == 0; }
inline bool is_zero(const Rat& a) { return sgn(a) == 0; }
inline bool is_zero(const Fp& a) { return a == Fp(0); }

inline bool is_one(const Int& a) { return a == 1; }
inline bool is_one(const Rat& a) { return a == 1; }
inline bool is_one(const Fp& a) { return a == Fp(1); }

inline std::string scalar_to_string(const Int& a) { return a.get_str(); }
inline std::string scalar_to_string(const Rat& a) {
  Rat c(a);
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}
inline std::string scalar_to_string(const Fp& a) { return std::to_string(a.rep()); }

}  // namespace koszulkit
