#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "twopt/error.hpp"
#include "twopt/instance.hpp"
#include "twopt/rng.hpp"
#include "twopt/stochastic.hpp"

using namespace twopt;

TEST_SUITE("rng") {

TEST_CASE("mix64 and derive_seed match an independent splitmix64") {
  // Values from a separate Python implementation of the splitmix64 step.
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(1) == 0x910a2dec89025cc1ULL);
  CHECK(derive_seed(1, 2, 3) == 0x14e92e523aabe1bdULL);
  CHECK(derive_seed(0, 0, 0) == 0x7a1bbc05c7a8016fULL);
}

TEST_CASE("derived seeds are distinct across a grid") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 50; ++a) {
    for (std::uint64_t b = 0; b < 50; ++b) seen.insert(derive_seed(99, a, b));
  }
  CHECK(seen.size() == 2500);
}

TEST_CASE("uniform and normal draws") {
  Rng a(5), b(5);
  for (int k = 0; k < 1000; ++k) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform());
  }
  // normal() is the inverse CDF of the open uniform: Phi(z) recovers u.
  Rng u_src(6), z_src(6);
  for (int k = 0; k < 1000; ++k) {
    const double u = u_src.uniform_open();
    const double z = z_src.normal();
    CHECK(0.5 * std::erfc(-z / std::sqrt(2.0)) == doctest::Approx(u).epsilon(1e-12));
  }
}

TEST_CASE("normal moments") {
  Rng r(7);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int k = 0; k < n; ++k) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  CHECK(std::abs(mean) <= 3.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) <= 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("uniform_index stays in range and covers it") {
  Rng r(8);
  std::set<std::size_t> seen;
  for (int k = 0; k < 2000; ++k) {
    const auto i = r.uniform_index(7);
    CHECK(i < 7);
    seen.insert(i);
  }
  CHECK(seen.size() == 7);
  CHECK_THROWS_AS(r.uniform_index(0), Error);
}

}

TEST_SUITE("instance") {

TEST_CASE("origin families") {
  const auto u = make_origins(OriginFamily::uniform, 50, 3, 1);
  CHECK(u.size() == 50);
  CHECK(u.dim() == 3);
  for (double v : u.flat()) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  CHECK(make_origins(OriginFamily::uniform, 50, 3, 1) == u);

  const auto g = make_origins(OriginFamily::grid, 5, 2, 0);  // 3x3 lattice, first five cells
  CHECK(g.size() == 5);
  CHECK(g.at(0) == Point{1.0 / 6, 1.0 / 6});
  const auto s = make_origins(OriginFamily::single_point, 4, 2, 0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(s.at(i) == Point{0.5, 0.5});
  CHECK(parse_origin_family("single-point") == OriginFamily::single_point);
  CHECK_THROWS_AS(parse_origin_family("cube"), Error);
}

TEST_CASE("json round trip is exact") {
  const auto origins = make_origins(OriginFamily::uniform, 20, 2, 3);
  const Instance inst = perturb(origins, 0.05, 17);
  const Instance back = instance_from_json(nlohmann::json::parse(instance_to_json(inst).dump()));
  CHECK(back.points == inst.points);
  CHECK(back.origins == inst.origins);
  CHECK(back.sigma == inst.sigma);
  CHECK(back.seed == inst.seed);

  const auto path = std::filesystem::temp_directory_path() / "twopt_instance_roundtrip.json";
  write_json_file(path, instance_to_json(inst));
  CHECK(instance_from_json(read_json_file(path)).points == inst.points);
  std::filesystem::remove(path);
}

TEST_CASE("malformed instances are rejected") {
  CHECK_THROWS_AS(instance_from_json(nlohmann::json::parse(R"({"dim": 2})")), Error);
  CHECK_THROWS_AS(
      instance_from_json(nlohmann::json::parse(
          R"({"dim":2,"sigma":0,"seed":0,"origins":[[0,0]],"points":[[0,0],[1,1]]})")),
      Error);
  CHECK_THROWS_AS(read_json_file("/nonexistent/twopt.json"), Error);
}

}
