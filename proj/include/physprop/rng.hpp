#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace physprop {

/// Deterministic random source used everywhere in the library.
///
/// std::mt19937_64 raw output is fully specified by the standard; the
/// distributions are implemented here (53-bit uniform mapping, Box-Muller)
/// instead of std::uniform_real_distribution / std::normal_distribution so
/// that streams are bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  /// Uniform in the open interval (lo, hi); endpoints are rejected.
  double uniform_open(double lo, double hi) {
    for (;;) {
      const double v = uniform(lo, hi);
      if (v > lo && v < hi) return v;
    }
  }

  /// Standard normal via Box-Muller (two uniforms per draw, no caching).
  double gauss() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      const std::uint64_t v = engine_();
      if (v < limit) return v % n;
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 step; used to derive per-record seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace physprop
