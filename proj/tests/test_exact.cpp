#include <doctest.h>

#include <cmath>

#include "twopt/error.hpp"
#include "twopt/exact.hpp"
#include "twopt/instance.hpp"

using namespace twopt;

namespace {

Instance square() { return make_fixed_instance(PointSet(2, {0, 0, 1, 0, 1, 1, 0, 1})); }

Instance polygon(std::size_t n, const std::vector<int>& label_order) {
  std::vector<double> flat(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
    const auto slot = static_cast<std::size_t>(label_order[k]);
    flat[2 * slot] = std::cos(t);
    flat[2 * slot + 1] = std::sin(t);
  }
  return make_fixed_instance(PointSet(2, flat));
}

}  // namespace

TEST_SUITE("exact") {

TEST_CASE("small fixed instances") {
  for (auto algo : {ExactAlgorithm::brute_force, ExactAlgorithm::held_karp}) {
    CHECK(solve_exact(square(), Metric::euclidean, algo).optimal_length == doctest::Approx(4.0));
    CHECK(solve_exact(square(), Metric::squared_euclidean, algo).optimal_length == doctest::Approx(4.0));
    const Instance tri = make_fixed_instance(PointSet(2, {0, 0, 3, 0, 0, 4}));
    CHECK(solve_exact(tri, Metric::euclidean, algo).optimal_length == doctest::Approx(12.0));
    // Pentagon with scrambled labels: optimum is the perimeter in angular order.
    const Instance pent = polygon(5, {3, 0, 4, 1, 2});
    const auto r = solve_exact(pent, Metric::euclidean, algo);
    CHECK(r.optimal_length == doctest::Approx(10.0 * std::sin(M_PI / 5)));
    CHECK(r.optimal_tour.same_cycle(Tour({3, 0, 4, 1, 2}, pent.points, Metric::euclidean)));
  }
  CHECK_THROWS_AS(brute_force(make_fixed_instance(make_origins(OriginFamily::uniform, 12, 2, 1)), Metric::euclidean),
                  Error);
  CHECK_THROWS_AS(held_karp(make_fixed_instance(make_origins(OriginFamily::uniform, 21, 2, 1)), Metric::euclidean),
                  Error);
  CHECK(parse_exact_algorithm("heldkarp") == ExactAlgorithm::held_karp);
  CHECK_THROWS_AS(parse_exact_algorithm("lkh"), Error);
}

TEST_CASE("held-karp equals brute force and its tour length") {
  for (Metric m : {Metric::manhattan, Metric::euclidean, Metric::squared_euclidean}) {
    for (std::uint64_t s = 0; s < 15; ++s) {
      const std::size_t n = 4 + s % 7;
      const Instance inst = make_fixed_instance(make_origins(OriginFamily::uniform, n, 2, 40 + s));
      const auto hk = held_karp(inst, m);
      const auto bf = brute_force(inst, m);
      CHECK(hk.optimal_length == doctest::Approx(bf.optimal_length).epsilon(1e-12));
      CHECK(hk.optimal_length == doctest::Approx(hk.optimal_tour.cached_length()).epsilon(1e-12));
    }
  }
}

TEST_CASE("mst") {
  CHECK(mst_length(square(), Metric::euclidean) == doctest::Approx(3.0));
  CHECK(mst_length(make_fixed_instance(PointSet(2, {0, 0, 3, 4})), Metric::euclidean) == doctest::Approx(5.0));
  CHECK(mst_length(make_fixed_instance(PointSet(2, {0.5, 0.5})), Metric::euclidean) == 0.0);
  for (Metric m : {Metric::manhattan, Metric::euclidean}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Instance inst = make_fixed_instance(make_origins(OriginFamily::uniform, 9, 2, 60 + s));
      const double mst = mst_length(inst, m);
      const double opt = held_karp(inst, m).optimal_length;
      CHECK(mst <= opt + 1e-12);
      CHECK(opt <= 2.0 * mst + 1e-12);
    }
  }
}

TEST_CASE("two-opt maximum estimate") {
  CHECK(estimate_two_opt_max(square(), Metric::euclidean, 5, Pivot::first, 1e-12, 1) == doctest::Approx(4.0));
  const Instance inst = make_fixed_instance(make_origins(OriginFamily::uniform, 10, 2, 70));
  const double opt = held_karp(inst, Metric::euclidean).optimal_length;
  double prev = 0.0;
  for (std::size_t r : {1, 5, 20}) {
    const double est = estimate_two_opt_max(inst, Metric::euclidean, r, Pivot::first, 1e-12, 3);
    CHECK(est >= opt * (1 - 1e-9));
    CHECK(est >= prev);
    prev = est;
  }
  // Convex position: every 2-optimal tour is the hull cycle.
  const Instance oct = polygon(8, {0, 5, 2, 7, 4, 1, 6, 3});
  const double hull = held_karp(oct, Metric::euclidean).optimal_length;
  CHECK(estimate_two_opt_max(oct, Metric::euclidean, 30, Pivot::random, 1e-12, 4) ==
        doctest::Approx(hull).epsilon(1e-12));
  CHECK(estimate_two_opt_max(inst, Metric::euclidean, 8, Pivot::first, 1e-12, 5, kernels::Exec::serial) ==
        estimate_two_opt_max(inst, Metric::euclidean, 8, Pivot::first, 1e-12, 5, kernels::Exec::parallel));
}

TEST_CASE("edge length bins") {
  CHECK(edge_length_bin(1.0, 1.0) == 0);   // [OPT, 2 OPT)
  CHECK(edge_length_bin(0.5, 1.0) == 1);   // boundary goes to the smaller index
  CHECK(edge_length_bin(0.49, 1.0) == 2);
  CHECK(edge_length_bin(0.75, 1.0) == 1);
  CHECK(edge_length_bin(0.0, 1.0) == kZeroLengthBin);
  CHECK_THROWS_AS(edge_length_bin(0.5, 0.0), Error);

  const Instance sq = square();
  const auto opt = held_karp(sq, Metric::euclidean);
  const auto bins = edge_length_histogram(opt.optimal_tour, sq, Metric::euclidean, opt.optimal_length);
  REQUIRE(bins.size() == 1);  // all edges equal
  CHECK(bins[0].bin == 2);    // 1 in [4/4, 4/2)
  CHECK(bins[0].count == 4);

  const Instance inst = make_fixed_instance(make_origins(OriginFamily::uniform, 11, 2, 80));
  const auto r = held_karp(inst, Metric::euclidean);
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& b : edge_length_histogram(r.optimal_tour, inst, Metric::euclidean, r.optimal_length)) {
    CHECK(b.bin >= 1);
    total += b.total_length;
    count += b.count;
  }
  CHECK(count == 11);
  CHECK(total == doctest::Approx(r.optimal_length).epsilon(1e-9));
  CHECK_THROWS_AS(edge_length_histogram(r.optimal_tour, inst, Metric::euclidean, 0.0), Error);
}

}
