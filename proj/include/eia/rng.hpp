#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>

namespace eia {

// SplitMix64 finalizer (Vigna's splitmix64), used both as the stream update
// and to derive substream keys.
inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded SplitMix64 stream with hierarchical substreams. A substream's output
// depends only on the parent's key and the tag, never on how much the parent
// has been consumed, so streams can be split per (user, role) without
// perturbing each other.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(seed), state_(seed) {}

  Rng substream(std::uint64_t tag) const {
    return Rng(splitmix64_mix(key_ ^ splitmix64_mix(tag ^ 0x517cc1b727220a95ULL)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased uniform on {0, ..., n-1} by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

  // Box-Muller pair of independent standard normals.
  std::pair<double, double> normal_pair() {
    double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  // Circularly symmetric complex normal CN(0, 1): variance 1/2 per real axis.
  std::complex<double> complex_normal() {
    auto [z0, z1] = normal_pair();
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return {z0 * inv_sqrt2, z1 * inv_sqrt2};
  }

 private:
  std::uint64_t key_;
  std::uint64_t state_;
};

}  // namespace eia
