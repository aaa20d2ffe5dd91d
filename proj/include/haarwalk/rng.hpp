#pragma once

#include <cstdint>

namespace haarwalk {

/// Counter-based splittable generator (SplitMix64 core). Streams keyed by
/// (seed, stream) are mutually independent and order-insensitive, so parallel
/// replicas reproduce bit-identically regardless of thread scheduling.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : state_(mix(seed ^ mix(kGamma * (stream + 1)))) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform in [0,1) with 53 random mantissa bits.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in {0,...,n-1}. Bias is O(n/2^53), irrelevant at desk scale.
  std::uint32_t next_below(std::uint32_t n) noexcept {
    return static_cast<std::uint32_t>(next_double() * static_cast<double>(n));
  }

private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace haarwalk
