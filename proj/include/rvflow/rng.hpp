#pragma once

#include <cstdint>

#include "rvflow/core.hpp"

namespace rvflow {

/// splitmix64 (Steele, Lea, Flood 2014). One multiply-xorshift pipeline per
/// output, period 2^64. Chosen as the project-wide PRNG because the whole
/// sequence is pinned down by the seed alone, so every randomized check and
/// every noise schedule reproduces bit-for-bit on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 mantissa bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  cx in_rect(const Rect& r) { return {uniform(r.x0, r.x1), uniform(r.y0, r.y1)}; }

  /// Uniform in the closed disk |z - center| <= radius.
  cx in_disk(cx center, double radius) {
    const double rho = radius * std::sqrt(next_double());
    const double phi = 2.0 * pi * next_double();
    return center + cx(rho * std::cos(phi), rho * std::sin(phi));
  }

  cx unit() {
    const double phi = 2.0 * pi * next_double();
    return {std::cos(phi), std::sin(phi)};
  }

 private:
  std::uint64_t state_;
};

/// Stateless splitmix64 step: hash of (seed, index). Used where a value must
/// be a pure function of its coordinates, e.g. the perturbation direction at
/// noise interval j.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace rvflow
