#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace clisr {

// Draws built directly on std::mt19937_64 output. The std::*_distribution
// classes are implementation-defined, so seeded golden values would not
// survive a standard-library change; everything here is fully specified.

// Uniform double in [0, 1).
inline double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n). Rejection sampling, unbiased. n must be > 0.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

// Uniform double in [lo, hi).
inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * u01(rng);
}

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic per-(epoch, example)-style seed derivation.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace clisr
