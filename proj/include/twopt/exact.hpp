#pragma once

#include <chrono>
#include <climits>
#include <cstdint>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twopt/instance.hpp"
#include "twopt/tour.hpp"

namespace twopt {

enum class ExactAlgorithm { held_karp, brute_force };

std::string_view exact_algorithm_name(ExactAlgorithm a);
ExactAlgorithm parse_exact_algorithm(std::string_view s);

struct ExactResult {
  double optimal_length = 0.0;
  Tour optimal_tour;
  ExactAlgorithm algorithm = ExactAlgorithm::held_karp;
  std::chrono::duration<double> elapsed{};
};

inline constexpr std::size_t kBruteForceMaxN = 11;
inline constexpr std::size_t kHeldKarpMaxN = 20;

/// Exhaustive minimum over all (n-1)!/2 cycles; 3 <= n <= 11.
ExactResult brute_force(const Instance& inst, Metric m);

/// Subset dynamic program with vertex 0 fixed as the start; 3 <= n <= 20.
ExactResult held_karp(const Instance& inst, Metric m);

ExactResult solve_exact(const Instance& inst, Metric m, ExactAlgorithm algo);

/// Weight of a minimum spanning tree (dense Prim). Zero for a single point.
double mst_length(const Instance& inst, Metric m,
                  kernels::Exec exec = kernels::Exec::parallel);

/// Estimates the longest 2-optimal tour as the largest final length over
/// `restarts` runs from random initial tours; restart r uses
/// derive_seed(seed, r), so the estimate is nondecreasing in `restarts`.
double estimate_two_opt_max(const Instance& inst, Metric m, std::size_t restarts, Pivot pivot,
                            double eps, std::uint64_t seed,
                            kernels::Exec exec = kernels::Exec::parallel);

/// Tour edges grouped by length relative to OPT: bin i collects edges with
/// length in [OPT / 2^i, OPT / 2^(i-1)), so a length on a bin boundary goes to
/// the smaller index. Zero-length edges are collected under kZeroLengthBin.
struct EdgeBin {
  int bin = 0;
  double total_length = 0.0;
  std::size_t count = 0;
};

inline constexpr int kZeroLengthBin = INT_MAX;

/// Nonempty bins in increasing bin order.
std::vector<EdgeBin> edge_length_histogram(const Tour& tour, const Instance& inst, Metric m,
                                           double opt_length);

/// Bin index of a positive edge length.
int edge_length_bin(double length, double opt_length);

nlohmann::json exact_result_to_json(const ExactResult& r);

}  // namespace twopt
