#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twopt/error.hpp"
#include "twopt/exact.hpp"
#include "twopt/instance.hpp"
#include "twopt/tour.hpp"

using namespace twopt;

namespace {

Instance square() { return make_fixed_instance(PointSet(2, {0, 0, 1, 0, 1, 1, 0, 1})); }

Instance circle(std::size_t n) {
  std::vector<double> flat;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
    flat.push_back(0.5 + 0.4 * std::cos(t));
    flat.push_back(0.5 + 0.4 * std::sin(t));
  }
  return make_fixed_instance(PointSet(2, flat));
}

// Independent Delta_min: all ordered quadruples of distinct vertices.
std::optional<double> brute_delta_min(const Instance& inst, Metric m, double eps) {
  const std::size_t n = inst.size();
  std::optional<double> best;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
          const double g = two_change_gain(inst.points.at(a), inst.points.at(b), inst.points.at(c),
                                           inst.points.at(d), m);
          if (g > eps && (!best || g < *best)) best = g;
        }
  return best;
}

}  // namespace

TEST_SUITE("tour") {

TEST_CASE("tour validation and length") {
  const Instance sq = square();
  CHECK(Tour({0, 1, 2, 3}, sq.points, Metric::euclidean).cached_length() == 4.0);
  CHECK(tour_length(std::vector<int>{3, 2, 1, 0}, sq.points, Metric::euclidean) == 4.0);
  CHECK_THROWS_AS(Tour({0, 1, 1, 3}, sq.points, Metric::euclidean), Error);
  CHECK_THROWS_AS(Tour({0, 1, 2}, sq.points, Metric::euclidean), Error);
  CHECK_THROWS_AS(Tour({0, 1, 2, 7}, sq.points, Metric::euclidean), Error);

  const Instance six = make_fixed_instance(make_origins(OriginFamily::uniform, 6, 2, 4));
  const std::vector<int> order{4, 1, 5, 0, 3, 2};
  double oracle = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    oracle += distance(six.points.at(static_cast<std::size_t>(order[i])),
                       six.points.at(static_cast<std::size_t>(order[(i + 1) % 6])), Metric::euclidean);
  }
  CHECK(tour_length(order, six.points, Metric::euclidean) == doctest::Approx(oracle).epsilon(1e-15));
}

TEST_CASE("crossing square") {
  const Instance sq = square();
  Tour t({0, 2, 1, 3}, sq.points, Metric::euclidean);
  const auto ch = find_improving(t, sq, Metric::euclidean, Pivot::first, 1e-12);
  REQUIRE(ch);
  CHECK(ch->gain == doctest::Approx(2 * std::sqrt(2.0) - 2));
  const Tour fixed = apply_two_change(t, *ch);
  CHECK(fixed.cached_length() == doctest::Approx(4.0));
  CHECK(!find_improving(fixed, sq, Metric::euclidean, Pivot::best, 1e-12));
  // inverse restores the original cycle
  const Tour back = apply_two_change(fixed, ch->inverse());
  CHECK(back.same_cycle(t));

  RunOptions opts;
  opts.init = InitRule::random;
  const auto rec = run_two_opt(sq, Metric::euclidean, opts);
  CHECK(rec.final_length == doctest::Approx(4.0));
  CHECK(rec.iterations <= 1);
}

TEST_CASE("apply rejects absent edges") {
  const Instance sq = square();
  const Tour t({0, 1, 2, 3}, sq.points, Metric::euclidean);
  CHECK_THROWS_AS(apply_two_change(t, TwoChange{0, 2, 1, 3, 0.0}), Error);
}

TEST_CASE("convex position tours are 2-optimal") {
  const Instance c = circle(12);
  std::vector<int> order(12);
  std::iota(order.begin(), order.end(), 0);
  const Tour t(order, c.points, Metric::euclidean);
  for (Pivot p : {Pivot::first, Pivot::best}) {
    CHECK(!find_improving(t, c, Metric::euclidean, p, 1e-12));
  }
}

TEST_CASE("initial tours") {
  const Instance tri = make_fixed_instance(PointSet(2, {0, 0, 3, 0, 0, 4}));
  CHECK(initial_tour(tri, Metric::euclidean, InitRule::random, 3).cached_length() == doctest::Approx(12.0));

  std::vector<double> flat;
  for (int k = 0; k < 8; ++k) {
    flat.push_back(k * k * 0.01);  // collinear, increasing gaps
    flat.push_back(0.0);
  }
  const Instance line = make_fixed_instance(PointSet(2, flat));
  const Tour nn = initial_tour(line, Metric::euclidean, InitRule::nearest_neighbor, 0);
  for (std::size_t i = 0; i < 8; ++i) CHECK(nn.at(i) == static_cast<int>(i));

  CHECK(initial_tour(square(), Metric::euclidean, InitRule::greedy_insertion, 0).cached_length() ==
        doctest::Approx(4.0));
  const Instance r = make_fixed_instance(make_origins(OriginFamily::uniform, 30, 2, 5));
  CHECK(initial_tour(r, Metric::euclidean, InitRule::random, 9).order() ==
        initial_tour(r, Metric::euclidean, InitRule::random, 9).order());
}

TEST_CASE("runs end 2-optimal with consistent bookkeeping") {
  for (Metric m : {Metric::manhattan, Metric::euclidean, Metric::squared_euclidean}) {
    for (Pivot p : {Pivot::first, Pivot::best, Pivot::random}) {
      const Instance inst = make_fixed_instance(make_origins(OriginFamily::uniform, 40, 2, 77));
      RunOptions opts;
      opts.pivot = p;
      opts.seed = 5;
      opts.record_changes = true;
      const auto rec = run_two_opt(inst, m, opts);
      CHECK(rec.converged);
      CHECK(rec.iterations == rec.changes.size());
      double sum = 0.0;
      Tour replay(rec.initial_tour, inst.points, m);
      for (const auto& c : rec.changes) {
        CHECK(c.gain > opts.eps);
        const double via_delta =
            delta(inst.points.at(static_cast<std::size_t>(c.b)), inst.points.at(static_cast<std::size_t>(c.c)),
                  inst.points.at(static_cast<std::size_t>(c.a)), m) -
            delta(inst.points.at(static_cast<std::size_t>(c.b)), inst.points.at(static_cast<std::size_t>(c.c)),
                  inst.points.at(static_cast<std::size_t>(c.d)), m);
        CHECK(std::abs(via_delta - c.gain) <= 1e-12 * std::max(1.0, c.gain));
        sum += c.gain;
        replay.apply(c);
      }
      CHECK(replay.same_cycle(Tour(rec.final_tour, inst.points, m)));
      CHECK(std::abs(rec.initial_length - sum - rec.final_length) <= 1e-9 * rec.initial_length);
      CHECK(std::abs(replay.cached_length() - rec.final_length) <= 1e-9 * rec.final_length);
      const Tour fin(rec.final_tour, inst.points, m);
      CHECK(!find_improving(fin, inst, m, Pivot::best, opts.eps));
      CHECK(rec.min_gain_observed.has_value() == (rec.iterations > 0));
    }
  }
}

TEST_CASE("iteration budget") {
  const Instance inst = make_fixed_instance(make_origins(OriginFamily::uniform, 50, 2, 3));
  RunOptions opts;
  opts.max_iter = 2;
  const auto rec = run_two_opt(inst, Metric::euclidean, opts);
  CHECK(rec.iterations == 2);
  CHECK(!rec.converged);
}

TEST_CASE("final length is at least the optimum") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Instance inst = make_fixed_instance(make_origins(OriginFamily::uniform, 8, 2, 100 + s));
    RunOptions opts;
    opts.seed = s;
    const auto rec = run_two_opt(inst, Metric::euclidean, opts);
    CHECK(rec.final_length >= held_karp(inst, Metric::euclidean).optimal_length - 1e-12);
  }
}

TEST_CASE("min_improvement") {
  CHECK(*min_improvement(square(), Metric::euclidean) == doctest::Approx(2 * std::sqrt(2.0) - 2));
  // All points coincide: no gain exceeds eps.
  CHECK(!min_improvement(make_fixed_instance(PointSet(2, std::vector<double>(10, 0.5))), Metric::euclidean));
  CHECK_THROWS_AS(min_improvement(make_fixed_instance(PointSet(2, {0, 0, 1, 0, 0, 1})), Metric::euclidean),
                  Error);
  for (Metric m : {Metric::manhattan, Metric::euclidean, Metric::squared_euclidean}) {
    const Instance inst = make_fixed_instance(make_origins(OriginFamily::uniform, 10, 2, 55));
    const auto a = min_improvement(inst, m);
    const auto b = brute_delta_min(inst, m, 1e-12);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(*a == *b);
  }
}

TEST_CASE("min_improvement invariances") {
  const Instance inst = make_fixed_instance(make_origins(OriginFamily::uniform, 9, 2, 56));
  const double th = 0.7;
  std::vector<double> rotated, shifted, relabeled;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double x = inst.points[i][0], y = inst.points[i][1];
    rotated.push_back(std::cos(th) * x - std::sin(th) * y + 3.0);
    rotated.push_back(std::sin(th) * x + std::cos(th) * y - 1.0);
    shifted.push_back(x + 0.25);
    shifted.push_back(y - 2.0);
  }
  for (std::size_t i = inst.size(); i-- > 0;) {
    relabeled.push_back(inst.points[i][0]);
    relabeled.push_back(inst.points[i][1]);
  }
  const auto rot = make_fixed_instance(PointSet(2, rotated));
  const auto sh = make_fixed_instance(PointSet(2, shifted));
  const auto rel = make_fixed_instance(PointSet(2, relabeled));
  for (Metric m : {Metric::euclidean, Metric::squared_euclidean}) {
    CHECK(*min_improvement(rot, m) == doctest::Approx(*min_improvement(inst, m)).epsilon(1e-9));
  }
  for (Metric m : {Metric::manhattan, Metric::euclidean, Metric::squared_euclidean}) {
    CHECK(*min_improvement(sh, m) == doctest::Approx(*min_improvement(inst, m)).epsilon(1e-9));
    CHECK(*min_improvement(rel, m) == *min_improvement(inst, m));
  }
}

TEST_CASE("run record json round trip") {
  const Instance inst = make_fixed_instance(make_origins(OriginFamily::uniform, 15, 2, 8));
  RunOptions opts;
  opts.record_changes = true;
  const auto rec = run_two_opt(inst, Metric::manhattan, opts);
  const auto j = run_record_to_json(rec);
  CHECK(j.contains("changes"));
  const auto back = run_record_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.final_length == rec.final_length);
  CHECK(back.iterations == rec.iterations);
  CHECK(back.changes.size() == rec.changes.size());
  CHECK(back.final_tour == rec.final_tour);
  opts.record_changes = false;
  CHECK(!run_record_to_json(run_two_opt(inst, Metric::manhattan, opts)).contains("changes"));
}

}
