#include "twopt/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twopt/error.hpp"
#include "twopt/exact.hpp"
#include "twopt/stochastic.hpp"

namespace twopt {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

constexpr int kMaxP = 5;

}  // namespace

double LayeredParams::a(int i) const {
  return static_cast<double>(ipow(p, 2 * p - 2 * i)) / static_cast<double>(P);
}

double LayeredParams::c(int i) const {
  return static_cast<double>(ipow(p, 2 * p - 2 * i - 1)) / static_cast<double>(P);
}

std::int64_t LayeredParams::padding_count() const { return ipow(p, 2 * p) - 1; }

int default_layer_count(int p, double sigma) {
  require(p >= 3 && p % 2 == 1, "p must be an odd integer >= 3");
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be >= 0");
  if (sigma == 0.0) return p;
  const double limit = 1.0 / (3.0 * sigma);
  int best = -1;
  for (int t = 1; t <= p; t += 2) {
    // Relative slack absorbs the rounding in 1/(3 sigma) for exact powers.
    if (static_cast<double>(ipow(p, 2 * t + 1)) <= limit * (1.0 + 1e-12)) best = t;
  }
  if (best < 1) {
    fail_validation("sigma too large for the layered construction: no odd t >= 1 satisfies "
                    "p^(2t+1) <= 1/(3 sigma)");
  }
  return best;
}

LayeredParams make_layered_params(int p, double sigma, std::optional<int> t_override) {
  require(p >= 3 && p % 2 == 1, "p must be an odd integer >= 3");
  require(p <= kMaxP, "p is limited to 5 (the padding alone has p^(2p) points)");
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be >= 0");
  LayeredParams lp;
  lp.p = p;
  lp.sigma = sigma;
  lp.P = 3 * ipow(p, 2 * p);
  if (t_override) {
    require(*t_override >= 1 && *t_override <= p && *t_override % 2 == 1,
            "t must be an odd integer in [1, p]");
    lp.t = *t_override;
  } else {
    lp.t = default_layer_count(p, sigma);
  }
  return lp;
}

std::string_view layer_part_name(LayerPart part) {
  switch (part) {
    case LayerPart::v1: return "V1";
    case LayerPart::v2: return "V2";
    case LayerPart::v3: return "V3";
    case LayerPart::padding: return "padding";
  }
  return "?";
}

LayerPart parse_layer_part(std::string_view s) {
  if (s == "V1") return LayerPart::v1;
  if (s == "V2") return LayerPart::v2;
  if (s == "V3") return LayerPart::v3;
  if (s == "padding") return LayerPart::padding;
  fail_validation("unknown layer part '" + std::string(s) + "'");
}

LayeredInstance build_layered(int p, double sigma, std::optional<int> t_override) {
  LayeredInstance li;
  li.params = make_layered_params(p, sigma, t_override);
  const LayeredParams& lp = li.params;
  const int t = lp.t;
  const auto P = static_cast<double>(lp.P);
  const std::int64_t third = ipow(p, 2 * p);  // P / 3

  // Layer heights as integer numerators over P, starting at y = 1/3.
  std::vector<std::int64_t> y_num(static_cast<std::size_t>(t) + 1);
  y_num[0] = third;
  for (int i = 1; i <= t; ++i) y_num[static_cast<std::size_t>(i)] = y_num[static_cast<std::size_t>(i) - 1] + ipow(p, 2 * p - 2 * (i - 1) - 1);

  std::vector<double> flat;
  // first index of (part, layer) for V1 / V2
  std::vector<std::vector<int>> first(2, std::vector<int>(static_cast<std::size_t>(t) + 1));
  auto push = [&](double x, double y, LayerPart part, int layer, int index) {
    flat.push_back(x);
    flat.push_back(y);
    li.labels.push_back({part, layer, index});
  };
  for (int side = 0; side < 2; ++side) {
    const std::int64_t shift = side == 0 ? 0 : 2 * third;
    const LayerPart part = side == 0 ? LayerPart::v1 : LayerPart::v2;
    for (int i = 0; i <= t; ++i) {
      first[static_cast<std::size_t>(side)][static_cast<std::size_t>(i)] = static_cast<int>(li.labels.size());
      const std::int64_t count = ipow(p, 2 * i) + 1;
      const std::int64_t spacing = ipow(p, 2 * p - 2 * i);
      for (std::int64_t k = 0; k < count; ++k) {
        push(static_cast<double>(shift + k * spacing) / P,
             static_cast<double>(y_num[static_cast<std::size_t>(i)]) / P, part, i,
             static_cast<int>(k));
      }
    }
  }
  const double y_t = static_cast<double>(y_num[static_cast<std::size_t>(t)]) / P;
  const std::int64_t bridge = ipow(p, 2 * t);  // number of V3 points (odd)
  const int v3_first = static_cast<int>(li.labels.size());
  for (std::int64_t k = 1; k <= bridge; ++k) {
    push(static_cast<double>(bridge + 1 + k) / static_cast<double>(3 * (bridge + 1)), y_t,
         LayerPart::v3, t, static_cast<int>(k - 1));
  }
  const std::int64_t mid = (bridge + 1) / 2;  // x = 1/2
  li.center = v3_first + static_cast<int>(mid - 1);
  li.center_left = li.center - 1;
  li.center_right = li.center + 1;
  const double cx = flat[2 * static_cast<std::size_t>(li.center)];
  const double cy = flat[2 * static_cast<std::size_t>(li.center) + 1];
  for (std::int64_t k = 0; k < lp.padding_count(); ++k) {
    push(cx, cy, LayerPart::padding, t, static_cast<int>(k));
  }
  li.origins = PointSet(2, std::move(flat));

  // Skeleton: V1 from layer t down to 0, the layer-0 link, V2 from layer 0 up
  // to t, then V3 right to left back to V1.
  auto layer_size = [&](int i) { return static_cast<int>(ipow(p, 2 * i) + 1); };
  for (int i = t; i >= 0; --i) {
    const int base = first[0][static_cast<std::size_t>(i)];
    const bool right_to_left = (t - i) % 2 == 0;
    for (int k = 0; k < layer_size(i); ++k) {
      li.skeleton.push_back(base + (right_to_left ? layer_size(i) - 1 - k : k));
    }
  }
  for (int i = 0; i <= t; ++i) {
    const int base = first[1][static_cast<std::size_t>(i)];
    const bool left_to_right = i % 2 == 0;
    for (int k = 0; k < layer_size(i); ++k) {
      li.skeleton.push_back(base + (left_to_right ? k : layer_size(i) - 1 - k));
    }
  }
  for (std::int64_t k = bridge; k >= 1; --k) li.skeleton.push_back(v3_first + static_cast<int>(k - 1));
  return li;
}

std::vector<int> two_opt_path(std::vector<int> path, const PointSet& pts, Metric m, double eps) {
  const std::size_t n = path.size();
  if (n < 4) return path;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 3 < n; ++i) {
      for (std::size_t j = i + 2; j + 1 < n; ++j) {
        const double g = quad_gain(pts, m, static_cast<std::size_t>(path[i]),
                                   static_cast<std::size_t>(path[i + 1]),
                                   static_cast<std::size_t>(path[j]),
                                   static_cast<std::size_t>(path[j + 1]));
        if (g > eps) {
          std::reverse(path.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                       path.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          improved = true;
        }
      }
    }
  }
  return path;
}

Tour build_long_tour(const LayeredInstance& li, const Instance& perturbed, double path_eps) {
  require(perturbed.size() == li.size() && perturbed.dim == 2,
          "perturbed instance does not correspond to the layered origins");
  const PointSet& pts = perturbed.points;
  const Metric m = Metric::euclidean;

  // Nearest-neighbour path from C_r through C and all padding points, then
  // path 2-opt with C_r and C_l pinned.
  std::vector<int> cloud{li.center};
  for (std::size_t v = 0; v < li.labels.size(); ++v) {
    if (li.labels[v].part == LayerPart::padding) cloud.push_back(static_cast<int>(v));
  }
  std::vector<int> path{li.center_right};
  std::vector<char> used(cloud.size(), 0);
  int cur = li.center_right;
  for (std::size_t step = 0; step < cloud.size(); ++step) {
    std::size_t pick = cloud.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cloud.size(); ++k) {
      if (used[k]) continue;
      const double dk = distance_unchecked(pts[static_cast<std::size_t>(cur)],
                                           pts[static_cast<std::size_t>(cloud[k])], m);
      if (dk < best) {
        best = dk;
        pick = k;
      }
    }
    used[pick] = 1;
    cur = cloud[pick];
    path.push_back(cur);
  }
  path.push_back(li.center_left);
  path = two_opt_path(std::move(path), pts, m, path_eps);

  std::vector<int> order;
  order.reserve(li.size());
  for (int v : li.skeleton) {
    if (v == li.center) {
      order.insert(order.end(), path.begin() + 1, path.end() - 1);
    } else {
      order.push_back(v);
    }
  }
  return Tour(std::move(order), pts, m);
}

ContainerCheck check_containers(const LayeredInstance& li, const Instance& perturbed) {
  require(perturbed.size() == li.size() && perturbed.dim == 2,
          "perturbed instance does not correspond to the layered origins");
  const double beta = li.params.beta();
  ContainerCheck out;
  for (std::size_t i = 0; i < li.size(); ++i) {
    const double disp = distance_unchecked(perturbed.points[i], li.origins[i], Metric::euclidean);
    out.worst_ratio = std::max(out.worst_ratio, disp / beta);
    if (disp > beta) out.passed = false;
  }
  return out;
}

std::optional<Violation> certify_two_optimality(const Instance& points, const Tour& tour,
                                                Metric m, double eps, kernels::Exec exec) {
  require(tour.size() == points.size(), "tour size does not match the instance");
  const auto hit = kernels::best_edge_pair(tour.order(), points.points, m, eps, exec);
  if (!hit) return std::nullopt;
  const auto& order = tour.order();
  const std::size_t n = order.size();
  Violation v;
  v.change = TwoChange{order[hit->i], order[hit->i + 1], order[hit->j],
                       order[hit->j + 1 == n ? 0 : hit->j + 1], hit->gain};
  v.first_position = hit->i;
  v.second_position = hit->j;
  return v;
}

double ratio_lower_bound(const LayeredInstance& li, const Instance& perturbed, const Tour& tour) {
  require(perturbed.size() == li.size(), "perturbed instance does not match the construction");
  require(tour.size() == perturbed.size(), "tour size does not match the instance");
  const double len = tour_length(tour.order(), perturbed.points, Metric::euclidean);
  return len / (2.0 * mst_length(perturbed, Metric::euclidean));
}

Instance perturb_layered(const LayeredInstance& li, std::uint64_t seed) {
  return perturb(li.origins, li.params.sigma, seed);
}

nlohmann::json layered_to_json(const LayeredInstance& li, const Instance& perturbed) {
  auto j = instance_to_json(perturbed);
  auto labels = nlohmann::json::array();
  for (const auto& l : li.labels) labels.push_back({layer_part_name(l.part), l.layer});
  j["labels"] = std::move(labels);
  j["params"] = {{"p", li.params.p},
                 {"t", li.params.t},
                 {"sigma", li.params.sigma},
                 {"P", li.params.P},
                 {"beta", li.params.beta()}};
  return j;
}

std::pair<LayeredInstance, Instance> layered_from_json(const nlohmann::json& j) {
  try {
    const auto& params = j.at("params");
    LayeredInstance li = build_layered(params.at("p").get<int>(), params.at("sigma").get<double>(),
                                       params.at("t").get<int>());
    Instance inst = instance_from_json(j);
    require(inst.origins == li.origins,
            "stored origins do not match the construction for the stored params");
    const auto& labels = j.at("labels");
    require(labels.size() == li.labels.size(), "label count does not match the construction");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      require(parse_layer_part(labels[i].at(0).get<std::string>()) == li.labels[i].part &&
                  labels[i].at(1).get<int>() == li.labels[i].layer,
              "stored labels do not match the construction");
    }
    return {std::move(li), std::move(inst)};
  } catch (const nlohmann::json::exception& e) {
    fail_validation(std::string("malformed layered instance JSON: ") + e.what());
  }
}

}  // namespace twopt
