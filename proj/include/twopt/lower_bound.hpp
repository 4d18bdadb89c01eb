#pragma once

// Layered lower-bound instance in [0,1]^2.
//
// Part V1 has layers 0..t; layer i holds p^(2i)+1 equidistant points with
// horizontal spacing a_i = p^(2p-2i)/P, and sits c_i = p^(2p-2i-1)/P below
// layer i+1 (P = 3 p^(2p)). Every layer spans exactly 1/3. V2 is V1 shifted
// right by 2/3. V3 bridges the two layer-t rows: p^(2t) equidistant points
// strictly between x = 1/3 and x = 2/3 at the layer-t height, its middle point
// C sitting at x = 1/2. p^(2p)-1 padding points are placed on C.

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "twopt/instance.hpp"
#include "twopt/kernels.hpp"
#include "twopt/tour.hpp"

namespace twopt {

struct LayeredParams {
  int p = 3;
  int t = 1;
  double sigma = 0.0;
  std::int64_t P = 0;  ///< 3 p^(2p)

  /// Horizontal spacing of layer i.
  double a(int i) const;
  /// Vertical gap between layer i and layer i+1.
  double c(int i) const;
  /// Container radius a_t / 8.
  double beta() const { return a(t) / 8.0; }
  std::int64_t padding_count() const;
};

/// Largest odd t in [1, p] with p^(2t+1) <= 1/(3 sigma); t = p for sigma = 0.
/// Throws when no odd t >= 1 qualifies.
int default_layer_count(int p, double sigma);

LayeredParams make_layered_params(int p, double sigma, std::optional<int> t_override = std::nullopt);

enum class LayerPart { v1, v2, v3, padding };

std::string_view layer_part_name(LayerPart part);
LayerPart parse_layer_part(std::string_view s);

struct PointLabel {
  LayerPart part = LayerPart::v1;
  int layer = 0;
  int index = 0;  ///< position within the layer, left to right
};

struct LayeredInstance {
  LayeredParams params;
  PointSet origins;
  std::vector<PointLabel> labels;
  /// Cyclic order of all non-padding points (C included) along the long tour.
  std::vector<int> skeleton;
  int center = -1;        ///< C
  int center_left = -1;   ///< C_l, the V3 neighbour left of C
  int center_right = -1;  ///< C_r, the V3 neighbour right of C

  std::size_t size() const noexcept { return origins.size(); }
};

/// Builds the origins and the tour skeleton. Requires odd 3 <= p <= 5 and, if
/// given, odd 1 <= t <= p.
LayeredInstance build_layered(int p, double sigma, std::optional<int> t_override = std::nullopt);

/// The designated long tour over `perturbed`: each layer traversed
/// horizontally, switching layers at alternating ends, V1 and V2 joined by the
/// layer-0 edge and the V3 row, with C's two tour edges replaced by a
/// path-2-optimal path from C_r through every padding point to C_l.
Tour build_long_tour(const LayeredInstance& li, const Instance& perturbed,
                     double path_eps = 1e-15);

/// Path-restricted 2-opt with both endpoints fixed; returns the optimized path.
std::vector<int> two_opt_path(std::vector<int> path, const PointSet& pts, Metric m, double eps);

struct ContainerCheck {
  bool passed = true;
  double worst_ratio = 0.0;  ///< max |X_j - x_j| / beta
};

ContainerCheck check_containers(const LayeredInstance& li, const Instance& perturbed);

struct Violation {
  TwoChange change;  ///< the improving 2-change on the two edges
  std::size_t first_position = 0;
  std::size_t second_position = 0;
};

/// Scans all tour-edge pairs; returns the maximum-gain pair with gain > eps.
std::optional<Violation> certify_two_optimality(const Instance& points, const Tour& tour,
                                                Metric m, double eps,
                                                kernels::Exec exec = kernels::Exec::parallel);

/// L(tour) / (2 MST): a certified lower bound on 2OPT/TSP for the instance.
double ratio_lower_bound(const LayeredInstance& li, const Instance& perturbed, const Tour& tour);

/// Perturbs the origins with the construction's sigma.
Instance perturb_layered(const LayeredInstance& li, std::uint64_t seed);

/// Standard instance JSON plus "labels" ([[part, layer], ...]) and "params"
/// ({p, t, sigma, P, beta}).
nlohmann::json layered_to_json(const LayeredInstance& li, const Instance& perturbed);

/// Rebuilds the construction from the params and checks the stored origins
/// and labels against it.
std::pair<LayeredInstance, Instance> layered_from_json(const nlohmann::json& j);

}  // namespace twopt
