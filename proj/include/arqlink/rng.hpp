// Counter-based random streams: every episode owns a substream derived from
// (seed, episode index), so serial and parallel runs draw identical values.
#pragma once

#include <cmath>
#include <cstdint>

namespace arqlink {

class CounterRng {
 public:
  using result_type = std::uint64_t;

  /// Substream `stream` of the generator keyed by `seed`.
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed + kGamma) ^ mix(stream + kGamma2)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }

  std::uint64_t operator()() { return mix(key_ ^ (kGamma * ++counter_)); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return ((*this)() >> 11) * 0x1.0p-53; }

  /// Exponential with mean 1.
  double exponential() { return -std::log1p(-uniform()); }

  /// Exact Poisson sample; sequential search for small means, transformed
  /// rejection (PTRS) for large ones.
  std::uint64_t poisson(double mean);

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kGamma2 = 0xD1B54A32D192ED03ull;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace arqlink
