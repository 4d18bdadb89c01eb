#pragma once

#include <cstdint>
#include <vector>

#include "twopt/geometry.hpp"
#include "twopt/instance.hpp"
#include "twopt/kernels.hpp"

namespace twopt {

/// Two-step model: X_i = x_i + Z_i with Z_i ~ N(0, sigma^2 I_d), all coordinates
/// independent. Points are drawn from a single Rng(seed) stream in point-major
/// order, so (origins, sigma, seed) reproduces the instance bit-exactly.
Instance perturb(const PointSet& origins, double sigma, std::uint64_t seed);

/// One-step model with the uniform-subcube density family: point i is uniform
/// on the axis-aligned cube of side phi^(-1/d) centred at `centers[i]` (or at
/// `centers[0]` for every point when a single centre is given). Each density
/// has volume 1/phi and is therefore bounded by phi.
struct OneStepSpec {
  double phi = 1.0;
  std::size_t dim = 2;
  PointSet centers;

  double side() const;
};

Instance one_step_sample(const OneStepSpec& spec, std::size_t n, std::uint64_t seed);

/// c * (sigma * sqrt(n ln n) + 1): half-width of a box holding the perturbed
/// set with probability >= 1 - 1/n! for c large enough. No failure-probability
/// claim is attached to small c.
double d_max_bound(std::size_t n, double sigma, double c = 2.0);

/// Density of |a| for a ~ N(0, sigma^2 I_d). Zero for x < 0.
double chi_pdf(double x, int d, double sigma);

/// Closed form of the integral of chi_pdf(x, d, sigma) * x^(-c) over (0, inf):
/// 2^(-c/2) Gamma((d-c)/2) / (sigma^c Gamma(d/2)). Requires d > c >= 1.
double chi_inverse_moment(int d, int c, double sigma);

struct TailBound {
  double threshold = 0.0;  ///< sigma * 3 * sqrt(d ln t)
  double bound = 0.0;      ///< t^(-2.9 d)
};

/// P(|x| >= threshold) <= bound for x ~ N(0, sigma^2 I_d) and t >= 3.
TailBound chi_square_tail(int d, double sigma, double t);

/// Empirical frequency of a Monte Carlo event.
struct McFrequency {
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;

  double frequency() const;
  /// Binomial standard error sqrt(p(1-p)/N) at the empirical p.
  double standard_error() const;
};

/// Empirical mean of a Monte Carlo statistic.
struct McMean {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

/// Frequency of a ~ N(0, sigma^2 I_d) landing in the closed ball B(center, eps).
McFrequency mc_ball_mass(int d, double sigma, const Point& center, double eps,
                         std::uint64_t samples, std::uint64_t seed,
                         kernels::Exec exec = kernels::Exec::parallel);

/// Frequency of c ~ N(0, sigma^2 I_d) lying within eps of the line through a and b.
McFrequency mc_line_closeness(int d, double sigma, const Point& a, const Point& b, double eps,
                              std::uint64_t samples, std::uint64_t seed,
                              kernels::Exec exec = kernels::Exec::parallel);

/// Frequency of |x| >= threshold for x ~ N(0, sigma^2 I_d).
McFrequency mc_norm_exceedance(int d, double sigma, double threshold, std::uint64_t samples,
                               std::uint64_t seed, kernels::Exec exec = kernels::Exec::parallel);

/// Sorted samples of |a| (a centred) and |b| (b with mean mu), drawn from
/// independent streams.
struct DominanceSample {
  std::vector<double> centered;
  std::vector<double> shifted;

  double cdf_centered(double t) const;
  double cdf_shifted(double t) const;
};

DominanceSample mc_dominance(int d, double sigma, const Point& mu, std::uint64_t samples,
                             std::uint64_t seed, kernels::Exec exec = kernels::Exec::parallel);

/// Monte Carlo estimate of E[1 / |b|] for b ~ N(mu, sigma^2 I_d).
McMean mc_inverse_norm_mean(int d, double sigma, const Point& mu, std::uint64_t samples,
                            std::uint64_t seed, kernels::Exec exec = kernels::Exec::parallel);

/// Fraction of `sorted` that is <= t.
double empirical_cdf(const std::vector<double>& sorted, double t);

}  // namespace twopt
