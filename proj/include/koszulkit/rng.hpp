#pragma once

// Deterministic random sampling.  std::mt19937_64 has a pinned algorithm, but
// the standard distributions do not, so bounded sampling is done by hand to
// keep generated suites byte-reproducible across platforms and toolchains.

#include <cstdint>
#include <random>

namespace koszulkit {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform in [0, n); n > 0.  Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform integer in [lo, hi] inclusive.
  long range(long lo, long hi) {
    return lo + (long)below((std::uint64_t)(hi - lo + 1));
  }

  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  // Stable derived seed for sample index i of a named sub-suite
  // (splitmix-style mixing).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t salt, std::uint64_t i) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1) + 0xbf58476d1ce4e5b9ull * (i + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace koszulkit
