#include "twopt/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "twopt/error.hpp"
#include "twopt/rng.hpp"

namespace twopt {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<double> distance_matrix(const PointSet& pts, Metric m) {
  const std::size_t n = pts.size();
  std::vector<double> dm(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dm[i * n + j] = distance_unchecked(pts[i], pts[j], m);
  }
  return dm;
}

}  // namespace

std::string_view exact_algorithm_name(ExactAlgorithm a) {
  return a == ExactAlgorithm::held_karp ? "heldkarp" : "brute";
}

ExactAlgorithm parse_exact_algorithm(std::string_view s) {
  if (s == "heldkarp" || s == "held_karp") return ExactAlgorithm::held_karp;
  if (s == "brute" || s == "brute_force") return ExactAlgorithm::brute_force;
  fail_validation("unknown exact algorithm '" + std::string(s) + "' (expected heldkarp|brute)");
}

ExactResult brute_force(const Instance& inst, Metric m) {
  const std::size_t n = inst.size();
  require(n >= 3, "brute_force needs n >= 3");
  require(n <= kBruteForceMaxN, "brute_force is limited to n <= 11");
  const auto start = Clock::now();
  const auto dm = distance_matrix(inst.points, m);
  std::vector<int> perm(n - 1);
  std::iota(perm.begin(), perm.end(), 1);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_perm = perm;
  do {
    if (perm.front() > perm.back()) continue;  // mirror image already counted
    double len = dm[static_cast<std::size_t>(perm.front())];
    for (std::size_t k = 0; k + 1 < perm.size(); ++k) {
      len += dm[static_cast<std::size_t>(perm[k]) * n + static_cast<std::size_t>(perm[k + 1])];
    }
    len += dm[static_cast<std::size_t>(perm.back()) * n];
    if (len < best) {
      best = len;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<int> order{0};
  order.insert(order.end(), best_perm.begin(), best_perm.end());
  ExactResult r{best, Tour(std::move(order), inst.points, m), ExactAlgorithm::brute_force,
                Clock::now() - start};
  return r;
}

ExactResult held_karp(const Instance& inst, Metric m) {
  const std::size_t n = inst.size();
  require(n >= 3, "held_karp needs n >= 3");
  require(n <= kHeldKarpMaxN, "held_karp is limited to n <= 20");
  const auto start = Clock::now();
  const auto dm = distance_matrix(inst.points, m);
  // Vertex v >= 1 is bit v-1; dp[mask * k + j] = shortest path 0 -> ... -> (j+1)
  // visiting exactly `mask`.
  const std::size_t k = n - 1;
  const std::size_t full = (std::size_t{1} << k) - 1;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dp((full + 1) * k, kInf);
  std::vector<std::uint8_t> parent((full + 1) * k, 0xFF);
  for (std::size_t j = 0; j < k; ++j) dp[(std::size_t{1} << j) * k + j] = dm[j + 1];
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const double base = dp[mask * k + j];
      if (base == kInf) continue;
      for (std::size_t nxt = 0; nxt < k; ++nxt) {
        if (mask & (std::size_t{1} << nxt)) continue;
        const std::size_t to = mask | (std::size_t{1} << nxt);
        const double cand = base + dm[(j + 1) * n + nxt + 1];
        if (cand < dp[to * k + nxt]) {
          dp[to * k + nxt] = cand;
          parent[to * k + nxt] = static_cast<std::uint8_t>(j);
        }
      }
    }
  }
  double best = kInf;
  std::size_t last = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double cand = dp[full * k + j] + dm[(j + 1) * n];
    if (cand < best) {
      best = cand;
      last = j;
    }
  }
  std::vector<int> rev;
  std::size_t mask = full;
  std::size_t cur = last;
  while (true) {
    rev.push_back(static_cast<int>(cur + 1));
    const std::uint8_t p = parent[mask * k + cur];
    mask &= ~(std::size_t{1} << cur);
    if (p == 0xFF) break;
    cur = p;
  }
  std::vector<int> order{0};
  order.insert(order.end(), rev.rbegin(), rev.rend());
  ExactResult r{best, Tour(std::move(order), inst.points, m), ExactAlgorithm::held_karp,
                Clock::now() - start};
  return r;
}

ExactResult solve_exact(const Instance& inst, Metric m, ExactAlgorithm algo) {
  return algo == ExactAlgorithm::held_karp ? held_karp(inst, m) : brute_force(inst, m);
}

double mst_length(const Instance& inst, Metric m, kernels::Exec exec) {
  require(inst.size() >= 1, "mst_length needs at least one point");
  return kernels::mst(inst.points, m, exec).weight;
}

double estimate_two_opt_max(const Instance& inst, Metric m, std::size_t restarts, Pivot pivot,
                            double eps, std::uint64_t seed, kernels::Exec exec) {
  require(restarts >= 1, "restarts must be >= 1");
  std::vector<double> finals(restarts);
  const auto count = static_cast<std::ptrdiff_t>(restarts);
  RunOptions base;
  base.init = InitRule::random;
  base.pivot = pivot;
  base.eps = eps;
  base.exec = kernels::Exec::serial;
#pragma omp parallel for schedule(dynamic, 1) if (exec == kernels::Exec::parallel)
  for (std::ptrdiff_t r = 0; r < count; ++r) {
    RunOptions opts = base;
    opts.seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    finals[static_cast<std::size_t>(r)] = run_two_opt(inst, m, opts).final_length;
  }
  return *std::max_element(finals.begin(), finals.end());
}

int edge_length_bin(double length, double opt_length) {
  require(opt_length > 0.0, "opt_length must be positive");
  require(length >= 0.0, "edge length must be >= 0");
  if (length == 0.0) return kZeroLengthBin;
  int e = 0;
  std::frexp(length / opt_length, &e);  // ratio in [2^(e-1), 2^e)
  return 1 - e;
}

std::vector<EdgeBin> edge_length_histogram(const Tour& tour, const Instance& inst, Metric m,
                                           double opt_length) {
  require(opt_length > 0.0, "edge_length_histogram needs a positive opt_length");
  require(tour.size() == inst.size(), "tour size does not match the instance");
  std::map<int, EdgeBin> bins;
  const auto& order = tour.order();
  const std::size_t n = order.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double len = distance_unchecked(inst.points[static_cast<std::size_t>(order[i])],
                                          inst.points[static_cast<std::size_t>(order[(i + 1) % n])], m);
    const int b = edge_length_bin(len, opt_length);
    auto& bin = bins[b];
    bin.bin = b;
    bin.total_length += len;
    ++bin.count;
  }
  std::vector<EdgeBin> out;
  for (const auto& [b, bin] : bins) out.push_back(bin);
  return out;
}

nlohmann::json exact_result_to_json(const ExactResult& r) {
  return {{"optimal_length", r.optimal_length},
          {"optimal_tour", r.optimal_tour.order()},
          {"algorithm", exact_algorithm_name(r.algorithm)},
          {"elapsed", r.elapsed.count()}};
}

}  // namespace twopt
