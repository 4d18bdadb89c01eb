#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "twopt/geometry.hpp"

namespace twopt {

/// A perturbed point set: origins x_i and their perturbed positions X_i.
struct Instance {
  std::size_t dim = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  PointSet origins;
  PointSet points;

  std::size_t size() const noexcept { return points.size(); }
};

/// Wraps fixed points as an unperturbed instance (origins == points, sigma = 0).
Instance make_fixed_instance(PointSet points);

enum class OriginFamily { uniform, grid, single_point };

std::string_view origin_family_name(OriginFamily f);
OriginFamily parse_origin_family(std::string_view name);

/// Origins in [0,1]^d: `uniform` draws iid uniform points from `seed`; `grid`
/// takes the first n cell centers of the smallest m^d lattice with m^d >= n in
/// lexicographic order; `single_point` puts every origin at (1/2, ..., 1/2).
PointSet make_origins(OriginFamily family, std::size_t n, std::size_t dim, std::uint64_t seed);

/// {"dim", "sigma", "seed", "origins": [[..]..], "points": [[..]..]}.
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json point_set_to_json(const PointSet& pts);
PointSet point_set_from_json(const nlohmann::json& j, std::size_t dim_hint = 0);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace twopt
