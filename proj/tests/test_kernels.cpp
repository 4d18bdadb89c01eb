#include <doctest.h>

#include <numeric>

#include "twopt/instance.hpp"
#include "twopt/kernels.hpp"
#include "twopt/rng.hpp"

using namespace twopt;

namespace {

const Metric kAll[] = {Metric::manhattan, Metric::euclidean, Metric::squared_euclidean};

std::vector<int> shuffled(std::size_t n, std::uint64_t seed) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_index(i + 1)]);
  return order;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("serial and OpenMP kernels agree bit for bit") {
  kernels::set_threads(4);
  for (Metric m : kAll) {
    for (std::size_t n : {5, 17, 60, 301}) {
      const PointSet pts = make_origins(OriginFamily::uniform, n, 2, n);
      const auto order = shuffled(n, n + 1);
      const auto a = kernels::serial::best_edge_pair(order, pts, m, 1e-12);
      const auto b = kernels::omp::best_edge_pair(order, pts, m, 1e-12);
      REQUIRE(a.has_value() == b.has_value());
      if (a) {
        CHECK(a->gain == b->gain);
        CHECK(a->i == b->i);
        CHECK(a->j == b->j);
      }
      const auto ma = kernels::serial::mst(pts, m);
      const auto mb = kernels::omp::mst(pts, m);
      CHECK(ma.weight == mb.weight);
      CHECK(ma.parent == mb.parent);
      if (n <= 60) {
        CHECK(kernels::serial::min_quad_gain(pts, m, 1e-12) == kernels::omp::min_quad_gain(pts, m, 1e-12));
      }
    }
  }
  const kernels::ChunkCounter count = [](Rng& rng, std::uint64_t k) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < k; ++i) hits += rng.uniform() < 0.3;
    return hits;
  };
  const kernels::ChunkFiller fill = [](Rng& rng, std::span<double> out) {
    for (double& v : out) v = rng.normal();
  };
  for (std::uint64_t samples : std::vector<std::uint64_t>{1, 1000, kernels::kMcChunk, 3 * kernels::kMcChunk + 17}) {
    CHECK(kernels::serial::mc_count(samples, 3, count) == kernels::omp::mc_count(samples, 3, count));
    CHECK(kernels::serial::mc_fill(samples, 3, fill) == kernels::omp::mc_fill(samples, 3, fill));
  }
}

TEST_CASE("best edge pair against a direct scan") {
  const PointSet pts = make_origins(OriginFamily::uniform, 40, 2, 21);
  const auto order = shuffled(40, 22);
  const std::size_t n = order.size();
  double best = 1e-12;
  std::size_t bi = 0, bj = 0;
  bool found = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const auto a = static_cast<std::size_t>(order[i]), b = static_cast<std::size_t>(order[i + 1]);
      const auto c = static_cast<std::size_t>(order[j]), d = static_cast<std::size_t>(order[(j + 1) % n]);
      const double g = distance(pts[a], pts[b], Metric::euclidean) + distance(pts[c], pts[d], Metric::euclidean) -
                       distance(pts[a], pts[c], Metric::euclidean) - distance(pts[b], pts[d], Metric::euclidean);
      if (g > best) {
        best = g;
        bi = i;
        bj = j;
        found = true;
      }
    }
  }
  const auto hit = kernels::best_edge_pair(order, pts, Metric::euclidean, 1e-12);
  REQUIRE(found);
  REQUIRE(hit);
  CHECK(hit->i == bi);
  CHECK(hit->j == bj);
  CHECK(hit->gain == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("thread count validation") {
  CHECK(kernels::default_threads() >= 1);
  CHECK_THROWS(kernels::set_threads(0));
}

}
