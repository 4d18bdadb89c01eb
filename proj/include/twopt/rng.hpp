#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace twopt {

/// SplitMix64 finalizer; the mixing step used for every derived seed.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of an independent stream, keyed by (base, a, b).
///
/// derive_seed(base, a, b) = mix64(mix64(mix64(base) ^ (a + K1)) ^ (b + K2)),
/// K1 = 0x9E3779B97F4A7C15, K2 = 0xBF58476D1CE4E5B9. Sweeps key task streams by
/// (base seed, config index, seed index); Monte Carlo kernels key chunk k by (seed, k).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// Seedable, splittable generator: mt19937_64 seeded through mix64.
///
/// Uniform doubles take the top 53 bits of one engine draw. Gaussian variates
/// use the inverse CDF, z = -sqrt(2) * erfc_inv(2u) with u in (0,1), so each
/// normal consumes exactly one engine draw. Streams are bit-reproducible per
/// seed within a build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in the open interval (0, 1).
  double uniform_open();
  /// Standard normal N(0, 1).
  double normal();
  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace twopt
