#include "twopt/instance.hpp"

#include <cmath>
#include <fstream>

#include "twopt/error.hpp"
#include "twopt/rng.hpp"

namespace twopt {

Instance make_fixed_instance(PointSet points) {
  Instance inst;
  inst.dim = points.dim();
  inst.origins = points;
  inst.points = std::move(points);
  return inst;
}

std::string_view origin_family_name(OriginFamily f) {
  switch (f) {
    case OriginFamily::uniform: return "uniform";
    case OriginFamily::grid: return "grid";
    case OriginFamily::single_point: return "single-point";
  }
  return "?";
}

OriginFamily parse_origin_family(std::string_view name) {
  if (name == "uniform") return OriginFamily::uniform;
  if (name == "grid") return OriginFamily::grid;
  if (name == "single-point" || name == "single_point") return OriginFamily::single_point;
  fail_validation("unknown origin family '" + std::string(name) +
                  "' (expected uniform|grid|single-point)");
}

PointSet make_origins(OriginFamily family, std::size_t n, std::size_t dim, std::uint64_t seed) {
  require(n >= 1, "origin count must be >= 1");
  require(dim >= 1, "dimension must be >= 1");
  std::vector<double> flat;
  flat.reserve(n * dim);
  switch (family) {
    case OriginFamily::uniform: {
      Rng rng(seed);
      for (std::size_t i = 0; i < n * dim; ++i) flat.push_back(rng.uniform());
      break;
    }
    case OriginFamily::grid: {
      std::size_t m = 1;
      while (std::pow(static_cast<double>(m), static_cast<double>(dim)) < static_cast<double>(n)) ++m;
      for (std::size_t i = 0; i < n; ++i) {
        // Digits of i in base m, most significant first.
        std::vector<double> row(dim);
        std::size_t rest = i;
        for (std::size_t k = dim; k-- > 0;) {
          row[k] = (static_cast<double>(rest % m) + 0.5) / static_cast<double>(m);
          rest /= m;
        }
        flat.insert(flat.end(), row.begin(), row.end());
      }
      break;
    }
    case OriginFamily::single_point:
      flat.assign(n * dim, 0.5);
      break;
  }
  return PointSet(dim, std::move(flat));
}

nlohmann::json point_set_to_json(const PointSet& pts) {
  auto arr = nlohmann::json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto row = pts[i];
    arr.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return arr;
}

PointSet point_set_from_json(const nlohmann::json& j, std::size_t dim_hint) {
  if (!j.is_array()) fail_validation("point list must be a JSON array");
  PointSet pts(dim_hint);
  for (const auto& row : j) {
    if (!row.is_array()) fail_validation("point must be a JSON array of numbers");
    Point p(row.get<std::vector<double>>());
    pts.push_back(p);
  }
  return pts;
}

nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["dim"] = inst.dim;
  j["sigma"] = inst.sigma;
  j["seed"] = inst.seed;
  j["origins"] = point_set_to_json(inst.origins);
  j["points"] = point_set_to_json(inst.points);
  return j;
}

Instance instance_from_json(const nlohmann::json& j) {
  try {
    Instance inst;
    inst.dim = j.at("dim").get<std::size_t>();
    inst.sigma = j.at("sigma").get<double>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.origins = point_set_from_json(j.at("origins"), inst.dim);
    inst.points = point_set_from_json(j.at("points"), inst.dim);
    require(inst.dim >= 1, "instance dim must be >= 1");
    require(inst.origins.size() == inst.points.size(), "origins and points differ in length");
    require(inst.points.dim() == inst.dim, "point dimension does not match dim");
    require(inst.sigma >= 0.0, "instance sigma must be >= 0");
    return inst;
  } catch (const nlohmann::json::exception& e) {
    fail_validation(std::string("malformed instance JSON: ") + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_io("cannot open '" + path.string() + "' for writing");
  out << j.dump(1) << '\n';
  if (!out) fail_io("write to '" + path.string() + "' failed");
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail_validation("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

}  // namespace twopt
