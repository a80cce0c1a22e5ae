#pragma once

#include <cstdint>
#include <random>

namespace voxbetti {

using Rng = std::mt19937_64;

/// Uniform integer in [0, n) by rejection. Unlike std::uniform_int_distribution
/// the sequence is the same under every standard library.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Partial Fisher-Yates: the first k entries become a uniform sample.
template <typename Vec>
void partial_shuffle(Vec& v, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k && i + 1 < v.size(); ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, v.size() - i));
    std::swap(v[i], v[j]);
  }
}

}  // namespace voxbetti
