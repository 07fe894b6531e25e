#pragma once

#include <cstdint>
#include <random>

namespace hopsched {

// std::mt19937_64 has a standard-mandated output sequence. The distribution
// adaptors in <random> do not, so the mappings below are spelled out.
using Rng = std::mt19937_64;
inline constexpr const char* kPrngName = "mt19937_64";

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Unbiased integer in [0, n), n > 0, by rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace hopsched
