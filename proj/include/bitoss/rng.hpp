#pragma once

#include <cstdint>

namespace bitoss {

/// Counter-based 64-bit generator. Output i (i = 0, 1, ...) is the SplitMix64
/// finaliser applied to seed + (i + 1) * 0x9E3779B97F4A7C15, which is the
/// standard SplitMix64 stream for that seed. Uniform doubles take the top 53
/// bits: u = (x >> 11) * 2^-53, so u lies in [0, 1).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t at(std::uint64_t index) const {
    return mix(seed_ + (index + 1) * 0x9E3779B97F4A7C15ULL);
  }

  std::uint64_t next() { return at(counter_++); }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace bitoss
