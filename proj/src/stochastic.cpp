#include "twopt/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twopt/error.hpp"
#include "twopt/rng.hpp"

namespace twopt {

namespace {

void check_mc_params(int d, double sigma, std::uint64_t samples) {
  require(d >= 1, "dimension must be >= 1");
  require(sigma > 0.0 && std::isfinite(sigma), "sigma must be positive");
  require(samples >= 1, "sample count must be >= 1");
}

}  // namespace

Instance perturb(const PointSet& origins, double sigma, std::uint64_t seed) {
  require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be >= 0");
  require(!origins.empty(), "origins must be nonempty");
  Instance inst;
  inst.dim = origins.dim();
  inst.sigma = sigma;
  inst.seed = seed;
  inst.origins = origins;
  std::vector<double> flat = origins.flat();
  Rng rng(seed);
  for (double& v : flat) v += sigma * rng.normal();
  inst.points = PointSet(inst.dim, std::move(flat));
  return inst;
}

double OneStepSpec::side() const { return std::pow(phi, -1.0 / static_cast<double>(dim)); }

Instance one_step_sample(const OneStepSpec& spec, std::size_t n, std::uint64_t seed) {
  require(spec.phi >= 1.0 && std::isfinite(spec.phi), "phi must be >= 1");
  require(spec.dim >= 1, "dimension must be >= 1");
  require(n >= 1, "sample count must be >= 1");
  require(spec.centers.size() == 1 || spec.centers.size() == n,
          "one-step spec needs one centre or one centre per point");
  require(spec.centers.dim() == spec.dim, "centre dimension does not match spec dim");
  const double side = spec.side();
  const double half = side / 2.0;
  constexpr double kSlack = 1e-12;
  for (std::size_t i = 0; i < spec.centers.size(); ++i) {
    for (double c : spec.centers[i]) {
      require(c - half >= -kSlack && c + half <= 1.0 + kSlack,
              "one-step subcube escapes [0,1]^d");
    }
  }
  Instance inst;
  inst.dim = spec.dim;
  inst.sigma = 0.0;
  inst.seed = seed;
  Rng rng(seed);
  std::vector<double> flat;
  flat.reserve(n * spec.dim);
  std::vector<double> centres;
  centres.reserve(n * spec.dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = spec.centers[spec.centers.size() == 1 ? 0 : i];
    for (std::size_t k = 0; k < spec.dim; ++k) {
      const double lo = std::max(0.0, c[k] - half);
      const double hi = std::min(1.0, c[k] + half);
      flat.push_back(lo + (hi - lo) * rng.uniform());
      centres.push_back(c[k]);
    }
  }
  inst.origins = PointSet(spec.dim, std::move(centres));
  inst.points = PointSet(spec.dim, std::move(flat));
  return inst;
}

double d_max_bound(std::size_t n, double sigma, double c) {
  require(n >= 2, "d_max_bound needs n >= 2 (log n must be positive)");
  require(sigma >= 0.0, "sigma must be >= 0");
  require(c >= 2.0, "d_max_bound needs c >= 2");
  const double nn = static_cast<double>(n);
  return c * (sigma * std::sqrt(nn * std::log(nn)) + 1.0);
}

double chi_pdf(double x, int d, double sigma) {
  require(d >= 1, "chi_pdf: d must be >= 1");
  require(sigma > 0.0, "chi_pdf: sigma must be > 0");
  if (x < 0.0) return 0.0;
  const double dd = static_cast<double>(d);
  const double log_norm = (1.0 - dd / 2.0) * std::log(2.0) - std::lgamma(dd / 2.0) - std::log(sigma);
  if (x == 0.0) return d == 1 ? std::exp(log_norm) : 0.0;
  const double r = x / sigma;
  return std::exp(log_norm + (dd - 1.0) * std::log(r) - r * r / 2.0);
}

double chi_inverse_moment(int d, int c, double sigma) {
  require(c >= 1, "chi_inverse_moment: c must be >= 1");
  require(d > c, "chi_inverse_moment: requires d > c (the integral diverges otherwise)");
  require(sigma > 0.0, "chi_inverse_moment: sigma must be > 0");
  const double dd = static_cast<double>(d);
  const double cc = static_cast<double>(c);
  return std::exp(-cc / 2.0 * std::log(2.0) + std::lgamma((dd - cc) / 2.0) - std::lgamma(dd / 2.0)) /
         std::pow(sigma, cc);
}

TailBound chi_square_tail(int d, double sigma, double t) {
  require(d >= 1, "chi_square_tail: d must be >= 1");
  require(sigma > 0.0, "chi_square_tail: sigma must be > 0");
  require(t >= 3.0, "chi_square_tail: requires t >= 3");
  const double dd = static_cast<double>(d);
  return {sigma * 3.0 * std::sqrt(dd * std::log(t)), std::pow(t, -2.9 * dd)};
}

double McFrequency::frequency() const {
  return samples == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(samples);
}

double McFrequency::standard_error() const {
  if (samples == 0) return 0.0;
  const double p = frequency();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

McFrequency mc_ball_mass(int d, double sigma, const Point& center, double eps,
                         std::uint64_t samples, std::uint64_t seed, kernels::Exec exec) {
  check_mc_params(d, sigma, samples);
  require(center.dim() == static_cast<std::size_t>(d), "ball centre dimension must equal d");
  require(eps >= 0.0, "eps must be >= 0");
  if (eps == 0.0) return {0, samples};
  const double eps2 = eps * eps;
  const auto& c = center.coords();
  const auto hits = kernels::mc_count(
      samples, seed,
      [&](Rng& rng, std::uint64_t count) {
        std::uint64_t h = 0;
        for (std::uint64_t s = 0; s < count; ++s) {
          double r2 = 0.0;
          for (int k = 0; k < d; ++k) {
            const double diff = sigma * rng.normal() - c[static_cast<std::size_t>(k)];
            r2 += diff * diff;
          }
          h += r2 <= eps2 ? 1 : 0;
        }
        return h;
      },
      exec);
  return {hits, samples};
}

McFrequency mc_line_closeness(int d, double sigma, const Point& a, const Point& b, double eps,
                              std::uint64_t samples, std::uint64_t seed, kernels::Exec exec) {
  check_mc_params(d, sigma, samples);
  require(d >= 2, "line closeness needs d >= 2");
  require(a.dim() == static_cast<std::size_t>(d) && b.dim() == static_cast<std::size_t>(d),
          "line points must have dimension d");
  require(!(a == b), "line through a and b is undefined for a == b");
  require(eps >= 0.0, "eps must be >= 0");
  if (eps == 0.0) return {0, samples};
  const auto ud = static_cast<std::size_t>(d);
  std::vector<double> dir(ud);
  double len2 = 0.0;
  for (std::size_t k = 0; k < ud; ++k) {
    dir[k] = b[k] - a[k];
    len2 += dir[k] * dir[k];
  }
  const double len = std::sqrt(len2);
  for (double& v : dir) v /= len;
  const double eps2 = eps * eps;
  const auto hits = kernels::mc_count(
      samples, seed,
      [&](Rng& rng, std::uint64_t count) {
        std::uint64_t h = 0;
        std::vector<double> v(ud);
        for (std::uint64_t s = 0; s < count; ++s) {
          double along = 0.0;
          double norm2 = 0.0;
          for (std::size_t k = 0; k < ud; ++k) {
            v[k] = sigma * rng.normal() - a[k];
            along += v[k] * dir[k];
          }
          // Perpendicular residual computed explicitly to avoid cancellation.
          for (std::size_t k = 0; k < ud; ++k) {
            const double r = v[k] - along * dir[k];
            norm2 += r * r;
          }
          h += norm2 <= eps2 ? 1 : 0;
        }
        return h;
      },
      exec);
  return {hits, samples};
}

McFrequency mc_norm_exceedance(int d, double sigma, double threshold, std::uint64_t samples,
                               std::uint64_t seed, kernels::Exec exec) {
  check_mc_params(d, sigma, samples);
  const double thr2 = threshold * threshold;
  const auto hits = kernels::mc_count(
      samples, seed,
      [&](Rng& rng, std::uint64_t count) {
        std::uint64_t h = 0;
        for (std::uint64_t s = 0; s < count; ++s) {
          double r2 = 0.0;
          for (int k = 0; k < d; ++k) {
            const double z = sigma * rng.normal();
            r2 += z * z;
          }
          h += (threshold <= 0.0 || r2 >= thr2) ? 1 : 0;
        }
        return h;
      },
      exec);
  return {hits, samples};
}

double empirical_cdf(const std::vector<double>& sorted, double t) {
  if (sorted.empty()) return 0.0;
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

double DominanceSample::cdf_centered(double t) const { return empirical_cdf(centered, t); }
double DominanceSample::cdf_shifted(double t) const { return empirical_cdf(shifted, t); }

DominanceSample mc_dominance(int d, double sigma, const Point& mu, std::uint64_t samples,
                             std::uint64_t seed, kernels::Exec exec) {
  check_mc_params(d, sigma, samples);
  require(mu.dim() == static_cast<std::size_t>(d), "mean dimension must equal d");
  auto norms_with_mean = [&](const std::vector<double>& mean) {
    return [&, mean](Rng& rng, std::span<double> out) {
      for (double& o : out) {
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) {
          const double z = mean[static_cast<std::size_t>(k)] + sigma * rng.normal();
          r2 += z * z;
        }
        o = std::sqrt(r2);
      }
    };
  };
  DominanceSample out;
  out.centered = kernels::mc_fill(samples, derive_seed(seed, 1),
                                  norms_with_mean(std::vector<double>(static_cast<std::size_t>(d), 0.0)),
                                  exec);
  out.shifted = kernels::mc_fill(samples, derive_seed(seed, 2), norms_with_mean(mu.coords()), exec);
  std::sort(out.centered.begin(), out.centered.end());
  std::sort(out.shifted.begin(), out.shifted.end());
  return out;
}

McMean mc_inverse_norm_mean(int d, double sigma, const Point& mu, std::uint64_t samples,
                            std::uint64_t seed, kernels::Exec exec) {
  check_mc_params(d, sigma, samples);
  require(mu.dim() == static_cast<std::size_t>(d), "mean dimension must equal d");
  const auto values = kernels::mc_fill(
      samples, seed,
      [&](Rng& rng, std::span<double> out) {
        for (double& o : out) {
          double r2 = 0.0;
          for (int k = 0; k < d; ++k) {
            const double z = mu[static_cast<std::size_t>(k)] + sigma * rng.normal();
            r2 += z * z;
          }
          o = 1.0 / std::sqrt(r2);
        }
      },
      exec);
  const double n = static_cast<double>(samples);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = samples > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n), samples};
}

}  // namespace twopt
