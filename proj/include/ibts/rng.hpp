#pragma once

#include <cstdint>
#include <random>

namespace ibts {

// All randomized units (trees, folds, synthetic sequences) draw from their
// own engine keyed by (master seed, unit index), so results never depend on
// scheduling. mt19937_64 output and seed_seq expansion are both pinned by the
// standard; the bounded/unit helpers below replace std::uniform_*_distribution,
// whose output is implementation-defined.
inline std::mt19937_64 substream_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
      0x1b75u};
  return std::mt19937_64(seq);
}

// Uniform draw from [0, n). n must be positive.
inline std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double rng_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Bernoulli(p) with a fixed-point threshold so the outcome depends only on
// the engine stream.
inline bool rng_chance(std::mt19937_64& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return rng_unit(rng) < p;
}

// In-place Fisher-Yates shuffle.
template <typename T>
void rng_shuffle(std::mt19937_64& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng_below(rng, i)]);
  }
}

}  // namespace ibts
