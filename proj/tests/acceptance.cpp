// Acceptance gate: runs every criterion and prints one PASS/FAIL line each.
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "twopt/exact.hpp"
#include "twopt/harness.hpp"
#include "twopt/instance.hpp"
#include "twopt/kernels.hpp"
#include "twopt/linked.hpp"
#include "twopt/lower_bound.hpp"
#include "twopt/rng.hpp"
#include "twopt/stochastic.hpp"
#include "twopt/tour.hpp"
#include "twopt/verify.hpp"

using namespace twopt;

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 20240607;
const Metric kMetrics[] = {Metric::manhattan, Metric::euclidean, Metric::squared_euclidean};
const Pivot kPivots[] = {Pivot::first, Pivot::best, Pivot::random};

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Instance uniform_instance(std::size_t n, std::size_t dim, std::uint64_t seed) {
  return make_fixed_instance(make_origins(OriginFamily::uniform, n, dim, seed));
}

Outcome exact_agreement() {
  const auto start = Clock::now();
  std::atomic<int> bad{0};
  double worst = 0.0;
#pragma omp parallel for schedule(dynamic, 1) reduction(max : worst)
  for (int k = 0; k < 300; ++k) {
    const Metric m = kMetrics[k / 100];
    const std::size_t n = 5 + static_cast<std::size_t>(k % 6);
    const Instance inst = uniform_instance(n, 2, derive_seed(kSeed, 1, static_cast<std::uint64_t>(k)));
    const double hk = held_karp(inst, m).optimal_length;
    const double bf = brute_force(inst, m).optimal_length;
    const double rel = std::abs(hk - bf) / std::max(hk, bf);
    worst = std::max(worst, rel);
    if (rel > 1e-9) ++bad;
  }
  const double secs = seconds_since(start);
  return {bad == 0 && secs < 60.0,
          "300 instances (100 per metric, n=5..10), worst rel diff " + format_double(worst) +
              ", " + format_double(std::round(secs * 100) / 100) + " s"};
}

Outcome local_optimality() {
  const auto start = Clock::now();
  const std::size_t sizes[] = {10, 25, 50, 100, 200};
  std::atomic<int> bad{0};
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < 200; ++k) {
    const Metric m = kMetrics[k % 3];
    const Pivot p = kPivots[(k / 3) % 3];
    const std::size_t n = sizes[(k / 9) % 5];
    const std::uint64_t s = derive_seed(kSeed, 2, static_cast<std::uint64_t>(k));
    const Instance inst = uniform_instance(n, 2, s);
    RunOptions opts;
    opts.pivot = p;
    opts.seed = derive_seed(s, 1);
    opts.exec = kernels::Exec::serial;
    const auto rec = run_two_opt(inst, m, opts);
    const auto hit = kernels::best_edge_pair(rec.final_tour, inst.points, m, 1e-12, kernels::Exec::serial);
    if (!rec.converged || hit) ++bad;
  }
  const double secs = seconds_since(start);
  return {bad == 0 && secs < 120.0,
          "200 runs (3 metrics x 3 pivots, n<=200), " + std::to_string(bad.load()) +
              " with an improving pair, " + format_double(std::round(secs * 100) / 100) + " s"};
}

Outcome iteration_bound() {
  std::atomic<int> bad{0}, checked{0};
  double tightest = 0.0;
#pragma omp parallel for schedule(dynamic, 1) reduction(max : tightest)
  for (int k = 0; k < 100; ++k) {
    const Metric m = kMetrics[k % 3];
    const std::size_t n = 5 + static_cast<std::size_t>(k % 8);
    const std::uint64_t s = derive_seed(kSeed, 3, static_cast<std::uint64_t>(k));
    const Instance inst = uniform_instance(n, 2, s);
    RunOptions opts;
    opts.pivot = kPivots[(k / 3) % 3];
    opts.seed = derive_seed(s, 1);
    opts.exec = kernels::Exec::serial;
    const auto rec = run_two_opt(inst, m, opts);
    const auto dmin = min_improvement(inst, m, opts.eps, kernels::Exec::serial);
    if (!dmin) continue;
    ++checked;
    const double limit = rec.initial_length / *dmin;
    tightest = std::max(tightest, static_cast<double>(rec.iterations) / limit);
    if (static_cast<double>(rec.iterations) > limit) ++bad;
  }
  return {bad == 0, std::to_string(checked.load()) + " instances with Delta_min (n=5..12), max iterations/(L0/Delta_min) = " +
                        format_double(tightest)};
}

Outcome chi_closed_forms() {
  const auto chi = verify_suite("chi", 0, kSeed);
  const auto integral = verify_suite("integral", 0, kSeed);
  double worst_pdf = 0.0, worst_moment = 0.0;
  for (const auto& c : chi.checks) {
    if (c.name.find("pdf vs") != std::string::npos) worst_pdf = std::max(worst_pdf, c.statistic);
  }
  for (const auto& c : integral.checks) worst_moment = std::max(worst_moment, c.statistic);
  return {chi.passed() && integral.passed(),
          "inverse moment max rel err " + format_double(worst_moment) +
              " (<= 1e-6), pdf vs half-normal/Rayleigh/Maxwell max rel err " +
              format_double(worst_pdf) + " (<= 1e-10)"};
}

Outcome monte_carlo_suite() {
  const auto start = Clock::now();
  std::size_t points = 0, failed = 0;
  double worst_margin = -1.0;  // max (statistic - bound) / (slack or bound)
  for (const char* name : {"ball", "line", "dominance", "tail"}) {
    const auto rep = verify_suite(name, 1'000'000, kSeed);
    for (const auto& c : rep.checks) {
      if (c.relation == "<=") {
        ++points;
        worst_margin = std::max(worst_margin, c.statistic - c.bound - c.slack);
      }
      if (!c.passed) ++failed;
    }
  }
  const double secs = seconds_since(start);
  return {failed == 0 && points >= 12 && secs < 300.0,
          std::to_string(points) + " bound checks at 1e6 samples, " + std::to_string(failed) +
              " failed, max (statistic - bound - 3SE) = " + format_double(worst_margin) + ", " +
              format_double(std::round(secs * 100) / 100) + " s"};
}

Outcome linked_pairs() {
  std::atomic<int> bad{0}, fallback{0};
  std::size_t min_slack = SIZE_MAX;
#pragma omp parallel for schedule(dynamic, 1) reduction(min : min_slack)
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 20 + static_cast<std::size_t>(k * 80 / 49);
    const std::uint64_t s = derive_seed(kSeed, 6, static_cast<std::uint64_t>(k));
    const Instance inst = uniform_instance(n, 2, s);
    RunOptions opts;
    opts.init = InitRule::random;
    opts.pivot = Pivot::first;
    opts.seed = derive_seed(s, 1);
    opts.record_changes = true;
    opts.exec = kernels::Exec::serial;
    const auto rec = run_two_opt(inst, Metric::euclidean, opts);
    const auto cert = count_disjoint_linked_pairs(rec.changes, n, 60);
    const std::size_t bound = linked_pair_bound(rec.iterations, n);
    if (cert.used_matching) ++fallback;
    if (cert.count() < bound || !is_valid_certificate(rec.changes, cert)) ++bad;
    min_slack = std::min(min_slack, cert.count() >= bound ? cert.count() - bound : 0);
  }
  return {bad == 0, "50 runs (n=20..100), " + std::to_string(bad.load()) + " below ceil(t/7 - 3n/28), " +
                        std::to_string(fallback.load()) + " used the matching fallback, min surplus " +
                        std::to_string(min_slack)};
}

Outcome tour_scaling() {
  const auto start = Clock::now();
  const std::vector<std::size_t> sizes{100, 200, 400, 800, 1600};
  constexpr int kSeeds = 30;
  std::vector<double> finals(sizes.size() * kSeeds);
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = static_cast<int>(finals.size()) - 1; t >= 0; --t) {  // big n first
    const std::size_t si = static_cast<std::size_t>(t) / kSeeds;
    const std::uint64_t s = derive_seed(kSeed, 7, static_cast<std::uint64_t>(t));
    const Instance inst = uniform_instance(sizes[si], 2, s);
    RunOptions opts;
    opts.init = InitRule::nearest_neighbor;
    opts.pivot = Pivot::first;
    opts.seed = derive_seed(s, 1);
    opts.exec = kernels::Exec::serial;
    finals[static_cast<std::size_t>(t)] = run_two_opt(inst, Metric::euclidean, opts).final_length;
  }
  std::vector<double> xs, means;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    double sum = 0.0;
    for (int k = 0; k < kSeeds; ++k) sum += finals[si * kSeeds + static_cast<std::size_t>(k)];
    xs.push_back(static_cast<double>(sizes[si]));
    means.push_back(sum / kSeeds);
  }
  const Fit length_fit = log_log_fit(xs, means);

  // Single origin at the centre, fixed n, independent seeds per sigma.
  const std::vector<double> sigmas{0.01, 0.02, 0.05, 0.1, 0.2};
  constexpr std::size_t kN = 200;
  std::vector<double> msts(sigmas.size() * kSeeds);
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < static_cast<int>(msts.size()); ++t) {
    const std::size_t si = static_cast<std::size_t>(t) / kSeeds;
    const PointSet origins = make_origins(OriginFamily::single_point, kN, 2, 0);
    const Instance inst = perturb(origins, sigmas[si], derive_seed(kSeed, 8, static_cast<std::uint64_t>(t)));
    msts[static_cast<std::size_t>(t)] = 2.0 * mst_length(inst, Metric::euclidean, kernels::Exec::serial);
  }
  std::vector<double> mean_bound;
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    double sum = 0.0;
    for (int k = 0; k < kSeeds; ++k) sum += msts[si * kSeeds + static_cast<std::size_t>(k)];
    mean_bound.push_back(sum / kSeeds);
  }
  const Fit sigma_fit = linear_fit(sigmas, mean_bound);
  const double secs = seconds_since(start);
  const bool ok = length_fit.slope >= 0.45 && length_fit.slope <= 0.55 && sigma_fit.r2 >= 0.95 &&
                  sigma_fit.slope > 0.0 && secs < 600.0;
  return {ok, "log-log slope of mean 2-opt length vs n = " + format_double(length_fit.slope) +
                  " (R^2 " + format_double(length_fit.r2) + "); 2 MST vs sigma at n=200: slope " +
                  format_double(sigma_fit.slope) + ", R^2 " + format_double(sigma_fit.r2) + ", " +
                  format_double(std::round(secs * 100) / 100) + " s"};
}

Outcome ratio_trend_check() {
  RatioConfig cfg;
  cfg.n = 12;
  cfg.sigmas = {0.01, 0.03, 0.1, 0.3, 1.0};
  cfg.seeds = 50;
  cfg.restarts = 50;
  cfg.seed = kSeed;
  const auto rows = run_ratio(cfg);
  double min_ratio = INFINITY;
  for (const auto& r : rows) min_ratio = std::min(min_ratio, r.ratio);
  const auto summary = summarize_ratio(cfg, rows);
  int violations = 0;
  bool small = true;
  std::string means;
  for (std::size_t i = 0; i < summary.size(); ++i) {
    means += (i ? "," : "") + format_double(std::round(summary[i].mean_ratio * 1e4) / 1e4);
    if (i == 0) continue;
    const double prev = summary[i - 1].mean_ratio;
    if (summary[i].mean_ratio > prev) {
      ++violations;
      small = small && summary[i].mean_ratio <= prev * 1.02;
    }
  }
  const Fit f = ratio_trend(summary);
  const bool ok = min_ratio >= 1.0 - 1e-9 && violations <= 1 && small;
  return {ok, "min ratio " + format_double(min_ratio) + ", mean ratio per sigma [" + means + "], " +
                  std::to_string(violations) + " increase(s); fit " + format_double(f.intercept) +
                  " + " + format_double(f.slope) + " ln(1/sigma)"};
}

Outcome lower_bound_construction() {
  const auto start = Clock::now();
  const auto li = build_layered(3, 1e-4, 1);
  int passed = 0, certified = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Instance inst = perturb_layered(li, derive_seed(kSeed, 9, s));
    if (!check_containers(li, inst).passed) continue;
    ++passed;
    const Tour tour = build_long_tour(li, inst);
    if (!certify_two_optimality(inst, tour, Metric::euclidean, 1e-12)) ++certified;
  }
  bool unperturbed_ok = true;
  double ratios[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    const auto flat = build_layered(3, 0.0, k == 0 ? 1 : 3);
    const Instance inst = make_fixed_instance(flat.origins);
    const Tour tour = build_long_tour(flat, inst);
    unperturbed_ok = unperturbed_ok && !certify_two_optimality(inst, tour, Metric::euclidean, 1e-15);
    ratios[k] = ratio_lower_bound(flat, inst, tour);
  }
  const double secs = seconds_since(start);
  const bool ok = passed >= 45 && certified == passed && unperturbed_ok && ratios[1] > ratios[0] &&
                  secs < 300.0;
  return {ok, "containers " + std::to_string(passed) + "/50, certified " + std::to_string(certified) +
                  "/" + std::to_string(passed) + ", unperturbed t=1,3 " +
                  (unperturbed_ok ? "2-optimal" : "NOT 2-optimal") + ", ratio bound " +
                  format_double(ratios[0]) + " -> " + format_double(ratios[1]) + ", " +
                  format_double(std::round(secs * 100) / 100) + " s"};
}

Outcome determinism() {
  const char* text =
      "n = 8,10,12\n"
      "sigma = 0.01,0.1\n"
      "metric = l2,l1\n"
      "pivot = first,random\n"
      "seeds = 5\n"
      "seed = 7\n"
      "restarts = 3\n"
      "linked = true\n";
  SweepConfig cfg = SweepConfig::parse(text);
  cfg.threads = 1;
  const std::string a = sweep_csv(run_sweep(cfg));
  cfg.threads = kernels::default_threads();
  const std::string b = sweep_csv(run_sweep(cfg));
  const std::string c = sweep_csv(run_sweep(cfg));
  return {a == b && b == c, std::to_string(cfg.row_count()) + " rows, byte-identical across three runs (1 and " +
                                std::to_string(cfg.threads) + " threads)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact-oracle agreement", exact_agreement},
      {"local-optimality certification", local_optimality},
      {"iteration-count bound", iteration_bound},
      {"chi closed forms", chi_closed_forms},
      {"Monte Carlo lemma suite", monte_carlo_suite},
      {"linked-pair bound", linked_pairs},
      {"tour-length scaling", tour_scaling},
      {"approximation-ratio trend", ratio_trend_check},
      {"lower-bound construction", lower_bound_construction},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("%s %2zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
