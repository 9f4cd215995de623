#pragma once

#include <cmath>
#include <cstdint>

namespace gcrd {

// Counter-based splittable generator. Output i of stream (seed, stream) is
// mix64(key + i*golden) with key derived from the seed/stream pair, i.e. a
// SplitMix64 sequence with a keyed origin. Any (sample index -> stream id)
// assignment therefore yields identical draws no matter how work is split
// across threads, which is what makes simulation output byte-reproducible
// independent of worker count.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed + GOLDEN) ^ mix64((stream + 1) * GOLDEN)) {}

  std::uint64_t next_u64() {
    counter_ += GOLDEN;
    return mix64(key_ + counter_);
  }

  // Uniform on (0, 1]: safe under log().
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double next_unit_open() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; pairs are cached. Hand-rolled rather than
  // std::normal_distribution because the standard does not pin that algorithm
  // down and reproducibility across toolchains is part of the contract.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gcrd
