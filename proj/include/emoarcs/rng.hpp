#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace emoarcs {

/// splitmix64. Chosen over <random> engines because its output is defined
/// bit-exactly by the algorithm, not by the standard library implementation,
/// so seeded runs reproduce across compilers.
class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, 1) with 53 bits of precision.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform draw in [0, n); rejection sampled.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t v = next();
    while (v > limit) v = next();
    return v % n;
  }

  /// Integer draw in [lo, hi], both inclusive.
  std::uint64_t next_between(std::uint64_t lo, std::uint64_t hi) {
    return lo + next_below(hi - lo + 1);
  }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Box-Muller; two unit draws per call, deterministic for a fixed state.
  double next_normal(double mean = 0.0, double stddev = 1.0) {
    double u1 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

/// Generator keyed by (seed, counter). Instance i's draws depend only on the
/// key, never on how many draws other instances consumed, which is what makes
/// per-instance work order-independent.
inline SplitMix64 keyed_rng(std::uint64_t seed, std::uint64_t counter) {
  SplitMix64 mixer(seed ^ (counter + 0x9e3779b97f4a7c15ULL) * 0xff51afd7ed558ccdULL);
  return SplitMix64(mixer.next());
}

}  // namespace emoarcs
