#include "twopt/rng.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

#include "twopt/error.hpp"

namespace twopt {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(mix64(base) ^ (a + 0x9E3779B97F4A7C15ULL)) ^ (b + 0xBF58476D1CE4E5B9ULL));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  const double u = uniform_open();
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

std::size_t Rng::uniform_index(std::size_t n) {
  require(n > 0, "uniform_index: empty range");
  const std::uint64_t range = n;
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % range);
}

}  // namespace twopt
