// Serial vs OpenMP kernels. Thread count follows TWOPT_THREADS.
#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "twopt/instance.hpp"
#include "twopt/kernels.hpp"
#include "twopt/rng.hpp"

using namespace twopt;

namespace {

PointSet points(std::size_t n) { return make_origins(OriginFamily::uniform, n, 2, 7); }

std::vector<int> identity(std::size_t n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

template <auto Fn>
void best_pair(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = points(n);
  const auto order = identity(n);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(order, pts, Metric::euclidean, 1e-12));
}

template <auto Fn>
void quad_gain(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(pts, Metric::euclidean, 1e-12));
}

template <auto Fn>
void mst(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(pts, Metric::euclidean));
}

template <auto Fn>
void mc(benchmark::State& state) {
  const kernels::ChunkCounter count = [](Rng& rng, std::uint64_t k) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < k; ++i) {
      const double x = rng.normal(), y = rng.normal();
      hits += x * x + y * y < 1.0;
    }
    return hits;
  };
  for (auto _ : state) benchmark::DoNotOptimize(Fn(static_cast<std::uint64_t>(state.range(0)), 1, count));
}

}  // namespace

BENCHMARK(best_pair<kernels::serial::best_edge_pair>)->Name("best_edge_pair/serial")->Arg(500)->Arg(2000);
BENCHMARK(best_pair<kernels::omp::best_edge_pair>)->Name("best_edge_pair/omp")->Arg(500)->Arg(2000);
BENCHMARK(quad_gain<kernels::serial::min_quad_gain>)->Name("min_quad_gain/serial")->Arg(40);
BENCHMARK(quad_gain<kernels::omp::min_quad_gain>)->Name("min_quad_gain/omp")->Arg(40);
BENCHMARK(mst<kernels::serial::mst>)->Name("mst/serial")->Arg(2000);
BENCHMARK(mst<kernels::omp::mst>)->Name("mst/omp")->Arg(2000);
BENCHMARK(mc<kernels::serial::mc_count>)->Name("mc_count/serial")->Arg(1 << 20);
BENCHMARK(mc<kernels::omp::mc_count>)->Name("mc_count/omp")->Arg(1 << 20);

BENCHMARK_MAIN();
