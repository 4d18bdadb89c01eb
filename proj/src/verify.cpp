#include "twopt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "twopt/error.hpp"
#include "twopt/harness.hpp"
#include "twopt/instance.hpp"
#include "twopt/linked.hpp"
#include "twopt/rng.hpp"
#include "twopt/stochastic.hpp"
#include "twopt/tour.hpp"

namespace twopt {

namespace {

using boost::math::quadrature::gauss_kronrod;

double quad(const std::function<double(double)>& f, double lo, double hi) {
  return gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14);
}

SubCheck make_check(std::string name, double statistic, double bound, double slack,
                    std::string relation = "<=") {
  SubCheck c{std::move(name), statistic, bound, slack, std::move(relation), false};
  if (c.relation == "<=") c.passed = statistic <= bound + slack;
  else if (c.relation == ">=") c.passed = statistic >= bound - slack;
  else c.passed = statistic > bound + slack;
  return c;
}

std::string fmt(double x) { return format_double(x); }

Point unit_offset(int d, double length) {
  std::vector<double> v(static_cast<std::size_t>(d), 0.0);
  v[0] = length;
  return Point(std::move(v));
}

void require_samples(std::uint64_t samples, std::string_view suite) {
  require(samples >= 1, "suite '" + std::string(suite) + "' is Monte Carlo only and needs samples >= 1");
}

void ball_suite(SuiteReport& rep, std::uint64_t samples, std::uint64_t seed, kernels::Exec exec) {
  require_samples(samples, "ball");
  struct P { int d; double sigma; double offset; double eps; };
  const P grid[] = {{2, 1.0, 0.0, 0.5}, {3, 0.5, 0.3, 0.2}, {1, 1.0, 1.0, 0.3}};
  std::uint64_t k = 0;
  for (const auto& p : grid) {
    const auto f = mc_ball_mass(p.d, p.sigma, unit_offset(p.d, p.offset), p.eps, samples,
                                derive_seed(seed, 1, k++), exec);
    rep.checks.push_back(make_check("ball d=" + std::to_string(p.d) + " sigma=" + fmt(p.sigma) +
                                        " offset=" + fmt(p.offset) + " eps=" + fmt(p.eps),
                                    f.frequency(), std::pow(p.eps / p.sigma, p.d),
                                    3.0 * f.standard_error()));
  }
}

void line_suite(SuiteReport& rep, std::uint64_t samples, std::uint64_t seed, kernels::Exec exec) {
  require_samples(samples, "line");
  struct P { int d; double sigma; Point a; Point b; double eps; };
  const P grid[] = {{2, 1.0, Point{0.0, 0.0}, Point{1.0, 0.0}, 0.1},
                    {3, 1.0, Point{0.5, 0.0, 0.0}, Point{0.5, 1.0, 0.0}, 0.3},
                    {2, 2.0, Point{1.0, 1.0}, Point{2.0, 3.0}, 0.5}};
  std::uint64_t k = 0;
  for (const auto& p : grid) {
    const auto f = mc_line_closeness(p.d, p.sigma, p.a, p.b, p.eps, samples,
                                     derive_seed(seed, 2, k++), exec);
    rep.checks.push_back(make_check("line d=" + std::to_string(p.d) + " sigma=" + fmt(p.sigma) +
                                        " eps=" + fmt(p.eps),
                                    f.frequency(), std::pow(p.eps / p.sigma, p.d - 1),
                                    3.0 * f.standard_error()));
  }
}

void dominance_suite(SuiteReport& rep, std::uint64_t samples, std::uint64_t seed,
                     kernels::Exec exec) {
  require_samples(samples, "dominance");
  struct P { int d; double sigma; Point mu; bool strict; };
  const P grid[] = {{2, 1.0, Point{0.0, 0.0}, false},
                    {2, 1.0, Point{3.0, 0.0}, true},
                    {3, 1.0, Point{1.0, 1.0, 0.0}, false}};
  std::uint64_t k = 0;
  for (const auto& p : grid) {
    const auto s = mc_dominance(p.d, p.sigma, p.mu, samples, derive_seed(seed, 3, k++), exec);
    const auto na = static_cast<double>(s.centered.size());
    const auto nb = static_cast<double>(s.shifted.size());
    // Worst-case (p = 1/2) two-sample standard error of a CDF difference.
    const double se = std::sqrt(0.25 * (1.0 / na + 1.0 / nb));
    double worst = -1.0;
    for (int q = 1; q < 100; ++q) {
      const double t = s.centered[static_cast<std::size_t>(q * (s.centered.size() - 1) / 100)];
      worst = std::max(worst, s.cdf_shifted(t) - s.cdf_centered(t));
    }
    const std::string tag = "d=" + std::to_string(p.d) + " |mu|=" + fmt(std::sqrt(
        std::inner_product(p.mu.coords().begin(), p.mu.coords().end(), p.mu.coords().begin(), 0.0)));
    rep.checks.push_back(make_check("dominance " + tag + " max(F_b - F_a)", worst, 0.0, 3.0 * se));
    if (p.strict) {
      const double median = s.centered[s.centered.size() / 2];
      rep.checks.push_back(make_check("dominance " + tag + " strict at median (F_a - F_b)",
                                      s.cdf_centered(median) - s.cdf_shifted(median), 0.0,
                                      3.0 * se, ">"));
    }
  }
}

void tail_suite(SuiteReport& rep, std::uint64_t samples, std::uint64_t seed, kernels::Exec exec) {
  require_samples(samples, "tail");
  struct P { int d; double sigma; double t; };
  const P grid[] = {{1, 1.0, 3.0}, {2, 1.0, 3.0}, {3, 2.0, 5.0}};
  std::uint64_t k = 0;
  for (const auto& p : grid) {
    const auto tb = chi_square_tail(p.d, p.sigma, p.t);
    const auto f = mc_norm_exceedance(p.d, p.sigma, tb.threshold, samples,
                                      derive_seed(seed, 4, k++), exec);
    rep.checks.push_back(make_check("tail d=" + std::to_string(p.d) + " sigma=" + fmt(p.sigma) +
                                        " t=" + fmt(p.t),
                                    f.frequency(), tb.bound, 3.0 * f.standard_error()));
  }
}

void chi_suite(SuiteReport& rep, std::uint64_t samples, std::uint64_t seed, kernels::Exec exec) {
  const double sqrt_2_pi = std::sqrt(2.0 / std::numbers::pi);
  const double xs[] = {0.1, 0.5, 1.0, 2.0, 3.7};
  const double sigmas[] = {0.5, 1.0, 2.0};
  const char* names[] = {"half-normal", "Rayleigh", "Maxwell"};
  for (int d = 1; d <= 3; ++d) {
    double worst = 0.0;
    for (double sigma : sigmas) {
      for (double x : xs) {
        const double g = std::exp(-x * x / (2.0 * sigma * sigma));
        double ref = 0.0;
        if (d == 1) ref = sqrt_2_pi / sigma * g;
        if (d == 2) ref = x / (sigma * sigma) * g;
        if (d == 3) ref = sqrt_2_pi * x * x / (sigma * sigma * sigma) * g;
        worst = std::max(worst, std::abs(chi_pdf(x, d, sigma) - ref) / ref);
      }
    }
    rep.checks.push_back(make_check(std::string("chi pdf vs ") + names[d - 1] + " (max rel err)",
                                    worst, 1e-10, 0.0));
  }
  for (int d = 1; d <= 8; ++d) {
    const double sigma = 1.5;
    const double mass = quad([&](double x) { return chi_pdf(x, d, sigma); }, 0.0, 20.0 * sigma);
    rep.checks.push_back(make_check("chi pdf mass d=" + std::to_string(d) + " (|I - 1|)",
                                    std::abs(mass - 1.0), 1e-8, 0.0));
  }
  if (samples == 0) return;
  for (int d : {2, 5}) {
    const double sigma = 1.0;
    const auto norms = kernels::mc_fill(samples, derive_seed(seed, 5, static_cast<std::uint64_t>(d)),
                                        [d, sigma](Rng& rng, std::span<double> out) {
                                          for (double& v : out) {
                                            double s = 0.0;
                                            for (int k = 0; k < d; ++k) {
                                              const double z = sigma * rng.normal();
                                              s += z * z;
                                            }
                                            v = std::sqrt(s);
                                          }
                                        },
                                        exec);
    double mean = 0.0;
    for (double v : norms) mean += v;
    mean /= static_cast<double>(norms.size());
    double var = 0.0;
    for (double v : norms) var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / static_cast<double>(norms.size() - 1) /
                                static_cast<double>(norms.size()));
    const double expected = quad([&](double x) { return x * chi_pdf(x, d, sigma); }, 0.0, 40.0);
    rep.checks.push_back(make_check("chi mean d=" + std::to_string(d) + " |MC - quadrature|",
                                    std::abs(mean - expected), 0.0, 3.0 * se));
  }
}

void integral_suite(SuiteReport& rep, std::uint64_t samples, std::uint64_t seed,
                    kernels::Exec exec) {
  for (int c = 1; c <= 2; ++c) {
    double worst = 0.0;
    for (int d = 2; d <= 12; ++d) {
      if (d <= c) continue;
      for (double sigma : {0.5, 1.0, 3.0}) {
        const double closed = chi_inverse_moment(d, c, sigma);
        const double numeric = quad(
            [&](double x) { return x > 0.0 ? chi_pdf(x, d, sigma) * std::pow(x, -c) : 0.0; }, 0.0,
            40.0 * sigma);
        worst = std::max(worst, std::abs(closed - numeric) / closed);
      }
    }
    rep.checks.push_back(make_check("inverse moment c=" + std::to_string(c) +
                                        " closed form vs quadrature (max rel err, d=2..12)",
                                    worst, 1e-6, 0.0));
  }
  if (samples == 0) return;
  // E[1/|b|] for b with nonzero mean stays below the centred value.
  for (int d : {2, 3, 5}) {
    const double sigma = 1.0;
    const auto m = mc_inverse_norm_mean(d, sigma, unit_offset(d, 1.5), samples,
                                        derive_seed(seed, 6, static_cast<std::uint64_t>(d)), exec);
    rep.checks.push_back(make_check("E[1/|b|] d=" + std::to_string(d) + " |mu|=1.5", m.mean,
                                    chi_inverse_moment(d, 1, sigma), 3.0 * m.standard_error));
  }
}

void linked_suite(SuiteReport& rep, std::uint64_t seed) {
  std::uint64_t k = 0;
  for (std::size_t n : {20, 40, 60, 80, 100}) {
    for (int rep_i = 0; rep_i < 2; ++rep_i, ++k) {
      const std::uint64_t s = derive_seed(seed, 7, k);
      const Instance inst = make_fixed_instance(make_origins(OriginFamily::uniform, n, 2, s));
      RunOptions opts;
      opts.init = InitRule::random;
      opts.pivot = Pivot::first;
      opts.seed = derive_seed(s, 1);
      opts.record_changes = true;
      opts.exec = kernels::Exec::serial;
      const auto rec = run_two_opt(inst, Metric::euclidean, opts);
      const auto cert = count_disjoint_linked_pairs(rec.changes, n);
      const std::string tag = "linked n=" + std::to_string(n) + " t=" + std::to_string(rec.iterations);
      rep.checks.push_back(make_check(tag + " disjoint type-0/1 pairs",
                                      static_cast<double>(cert.count()),
                                      static_cast<double>(linked_pair_bound(rec.iterations, n)), 0.0,
                                      ">="));
      rep.checks.push_back(make_check(tag + " certificate valid",
                                      is_valid_certificate(rec.changes, cert) ? 1.0 : 0.0, 1.0, 0.0,
                                      ">="));
    }
  }
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SubCheck& c) { return c.passed; });
}

std::string SuiteReport::to_text() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << (c.passed ? "pass" : "FAIL") << "  " << c.name << ": statistic=" << fmt(c.statistic)
        << ' ' << c.relation << " bound=" << fmt(c.bound) << " slack=" << fmt(c.slack) << '\n';
  }
  out << "suite " << suite << ": " << (passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

const std::vector<std::string_view>& suite_names() {
  static const std::vector<std::string_view> names{"ball", "line", "dominance", "chi",
                                                   "integral", "tail", "linked"};
  return names;
}

SuiteReport verify_suite(std::string_view name, std::uint64_t samples, std::uint64_t seed,
                         kernels::Exec exec) {
  SuiteReport rep;
  rep.suite = std::string(name);
  if (name == "ball") ball_suite(rep, samples, seed, exec);
  else if (name == "line") line_suite(rep, samples, seed, exec);
  else if (name == "dominance") dominance_suite(rep, samples, seed, exec);
  else if (name == "chi") chi_suite(rep, samples, seed, exec);
  else if (name == "integral") integral_suite(rep, samples, seed, exec);
  else if (name == "tail") tail_suite(rep, samples, seed, exec);
  else if (name == "linked") linked_suite(rep, seed);
  else fail_validation("unknown suite '" + std::string(name) +
                       "' (expected ball|line|dominance|chi|integral|tail|linked)");
  return rep;
}

}  // namespace twopt
