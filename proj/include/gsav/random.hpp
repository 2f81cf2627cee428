#pragma once

#include <cstdint>

namespace gsav {

/// Counter-based generator: draw k (k = 0, 1, ...) of seed s is
/// SplitMix64(s + (k + 1) * 0x9E3779B97F4A7C15), i.e. the (k+1)-th output of
/// the reference SplitMix64 stream seeded with s. Doubles take the top 53 bits.
/// Pure integer arithmetic, so streams are identical on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  static double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return mix(seed_, counter_++); }
  double uniform() { return to_unit(next_u64()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace gsav
