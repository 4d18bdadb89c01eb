#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp` with identical
// results (same tie-breaking, same reduction order where it matters); the
// dispatchers below pick one by `Exec`. Tests check the two agree bit-exactly.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "twopt/geometry.hpp"
#include "twopt/rng.hpp"

namespace twopt::kernels {

enum class Exec { serial, parallel };

/// Tour-edge pair (order[i], order[i+1]) / (order[j], order[j+1 mod n]), i < j.
struct PairScan {
  double gain = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

struct MstResult {
  double weight = 0.0;
  /// parent[v] for every v != root; parent[root] = -1. Root is vertex 0.
  std::vector<int> parent;
};

/// Samples per Monte Carlo chunk; chunk k draws from Rng(derive_seed(seed, k)).
inline constexpr std::uint64_t kMcChunk = 1u << 16;

/// Counts hits in `count` samples drawn from the given stream.
using ChunkCounter = std::function<std::uint64_t(Rng&, std::uint64_t count)>;
/// Fills `out` with one statistic per sample drawn from the given stream.
using ChunkFiller = std::function<void(Rng&, std::span<double> out)>;

namespace serial {
std::optional<PairScan> best_edge_pair(std::span<const int> order, const PointSet& pts, Metric m,
                                       double eps);
std::optional<double> min_quad_gain(const PointSet& pts, Metric m, double eps);
MstResult mst(const PointSet& pts, Metric m);
std::uint64_t mc_count(std::uint64_t samples, std::uint64_t seed, const ChunkCounter& fn);
std::vector<double> mc_fill(std::uint64_t samples, std::uint64_t seed, const ChunkFiller& fn);
}  // namespace serial

namespace omp {
std::optional<PairScan> best_edge_pair(std::span<const int> order, const PointSet& pts, Metric m,
                                       double eps);
std::optional<double> min_quad_gain(const PointSet& pts, Metric m, double eps);
MstResult mst(const PointSet& pts, Metric m);
std::uint64_t mc_count(std::uint64_t samples, std::uint64_t seed, const ChunkCounter& fn);
std::vector<double> mc_fill(std::uint64_t samples, std::uint64_t seed, const ChunkFiller& fn);
}  // namespace omp

/// Maximum-gain tour-edge pair with gain > eps; ties go to the smallest (i, j).
std::optional<PairScan> best_edge_pair(std::span<const int> order, const PointSet& pts, Metric m,
                                       double eps, Exec exec = Exec::parallel);

/// Smallest 2-change gain above eps over all quadruples of distinct vertices.
std::optional<double> min_quad_gain(const PointSet& pts, Metric m, double eps,
                                    Exec exec = Exec::parallel);

/// Dense Prim, O(n^2). Ties in the frontier go to the lowest vertex index.
MstResult mst(const PointSet& pts, Metric m, Exec exec = Exec::parallel);

std::uint64_t mc_count(std::uint64_t samples, std::uint64_t seed, const ChunkCounter& fn,
                       Exec exec = Exec::parallel);
std::vector<double> mc_fill(std::uint64_t samples, std::uint64_t seed, const ChunkFiller& fn,
                            Exec exec = Exec::parallel);

/// Worker count for parallel regions: TWOPT_THREADS if set, else all cores.
int default_threads();
void set_threads(int threads);

}  // namespace twopt::kernels
