#include "twopt/tour.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "twopt/error.hpp"
#include "twopt/rng.hpp"

namespace twopt {

namespace {

void check_permutation(const std::vector<int>& order) {
  const std::size_t n = order.size();
  require(n >= 3, "a tour needs at least 3 vertices");
  std::vector<char> seen(n, 0);
  for (int v : order) {
    require(v >= 0 && static_cast<std::size_t>(v) < n, "tour vertex out of range");
    require(!seen[static_cast<std::size_t>(v)], "tour visits a vertex twice");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

}  // namespace

Tour::Tour(std::vector<int> order, const PointSet& pts, Metric m)
    : order_(std::move(order)), metric_(m) {
  check_permutation(order_);
  require(order_.size() == pts.size(), "tour size does not match the point count");
  pos_.resize(order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) pos_[static_cast<std::size_t>(order_[i])] = i;
  length_ = tour_length(order_, pts, m);
}

int Tour::next(int v) const {
  const std::size_t p = position(v) + 1;
  return order_[p == order_.size() ? 0 : p];
}

int Tour::prev(int v) const {
  const std::size_t p = position(v);
  return order_[p == 0 ? order_.size() - 1 : p - 1];
}

bool Tour::has_edge(int u, int v) const {
  const auto n = static_cast<int>(order_.size());
  if (u < 0 || v < 0 || u >= n || v >= n || u == v) return false;
  return next(u) == v || prev(u) == v;
}

std::vector<int> Tour::canonical_order() const {
  const std::size_t n = order_.size();
  std::vector<int> out;
  out.reserve(n);
  const std::size_t start = position(0);
  const bool forward = next(0) <= prev(0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t p = forward ? (start + k) % n : (start + n - k) % n;
    out.push_back(order_[p]);
  }
  return out;
}

void Tour::reverse_range(std::size_t from, std::size_t to) {
  const std::size_t n = order_.size();
  std::size_t len = (to + n - from) % n + 1;
  if (2 * len > n) {
    // Reversing the complement yields the same cycle with less work.
    const std::size_t new_from = (to + 1) % n;
    const std::size_t new_to = (from + n - 1) % n;
    from = new_from;
    to = new_to;
    len = n - len;
  }
  for (std::size_t k = 0; k < len / 2; ++k) {
    const std::size_t p = (from + k) % n;
    const std::size_t q = (to + n - k) % n;
    std::swap(order_[p], order_[q]);
    pos_[static_cast<std::size_t>(order_[p])] = p;
    pos_[static_cast<std::size_t>(order_[q])] = q;
  }
}

void Tour::apply(const TwoChange& ch) {
  const auto n = static_cast<int>(order_.size());
  const std::array<int, 4> vs{ch.a, ch.b, ch.c, ch.d};
  for (int v : vs) require(v >= 0 && v < n, "2-change vertex out of range");
  require(ch.a != ch.b && ch.a != ch.c && ch.a != ch.d && ch.b != ch.c && ch.b != ch.d &&
              ch.c != ch.d,
          "2-change needs four distinct vertices");
  require(has_edge(ch.a, ch.b) && has_edge(ch.c, ch.d), "2-change removes an edge not in the tour");
  if (next(ch.a) == ch.b && next(ch.c) == ch.d) {
    reverse_range(position(ch.b), position(ch.c));
  } else if (prev(ch.a) == ch.b && prev(ch.c) == ch.d) {
    reverse_range(position(ch.a), position(ch.d));
  } else {
    fail_validation("2-change edges are oriented inconsistently; the result would not be a tour");
  }
  length_ -= ch.gain;
}

std::string_view init_rule_name(InitRule r) {
  switch (r) {
    case InitRule::random: return "random";
    case InitRule::nearest_neighbor: return "nn";
    case InitRule::greedy_insertion: return "greedy";
  }
  return "?";
}

InitRule parse_init_rule(std::string_view s) {
  if (s == "random") return InitRule::random;
  if (s == "nn" || s == "nearest_neighbor") return InitRule::nearest_neighbor;
  if (s == "greedy" || s == "greedy_insertion") return InitRule::greedy_insertion;
  fail_validation("unknown init rule '" + std::string(s) + "' (expected random|nn|greedy)");
}

std::string_view pivot_name(Pivot p) {
  switch (p) {
    case Pivot::first: return "first";
    case Pivot::best: return "best";
    case Pivot::random: return "random";
  }
  return "?";
}

Pivot parse_pivot(std::string_view s) {
  if (s == "first") return Pivot::first;
  if (s == "best") return Pivot::best;
  if (s == "random") return Pivot::random;
  fail_validation("unknown pivot rule '" + std::string(s) + "' (expected first|best|random)");
}

double tour_length(std::span<const int> order, const PointSet& pts, Metric m) {
  const std::size_t n = order.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(order[i]);
    const auto v = static_cast<std::size_t>(order[i + 1 == n ? 0 : i + 1]);
    total += distance_unchecked(pts[u], pts[v], m);
  }
  return total;
}

double tour_length(const Tour& tour, const Instance& inst, Metric m) {
  require(tour.size() == inst.size(), "tour size does not match the instance");
  return tour_length(tour.order(), inst.points, m);
}

namespace {

std::vector<int> nearest_neighbor_order(const PointSet& pts, Metric m) {
  const std::size_t n = pts.size();
  std::vector<int> order{0};
  std::vector<char> used(n, 0);
  used[0] = 1;
  std::size_t cur = 0;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t best = n;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      const double dv = distance_unchecked(pts[cur], pts[v], m);
      if (dv < best_d) {
        best_d = dv;
        best = v;
      }
    }
    used[best] = 1;
    order.push_back(static_cast<int>(best));
    cur = best;
  }
  return order;
}

std::vector<int> nearest_insertion_order(const PointSet& pts, Metric m) {
  const std::size_t n = pts.size();
  auto dist = [&](std::size_t u, std::size_t v) { return distance_unchecked(pts[u], pts[v], m); };
  std::vector<char> used(n, 0);
  std::vector<double> to_tour(n, std::numeric_limits<double>::infinity());
  std::vector<int> order{0};
  used[0] = 1;
  auto absorb = [&](std::size_t v) {
    for (std::size_t w = 0; w < n; ++w) {
      if (!used[w]) to_tour[w] = std::min(to_tour[w], dist(v, w));
    }
  };
  absorb(0);
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t w = 0; w < n; ++w) {
      if (!used[w] && (pick == n || to_tour[w] < to_tour[pick])) pick = w;
    }
    std::size_t best_pos = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    const std::size_t k = order.size();
    for (std::size_t i = 0; i < k; ++i) {
      const auto u = static_cast<std::size_t>(order[i]);
      const auto v = static_cast<std::size_t>(order[(i + 1) % k]);
      const double cost = dist(u, pick) + dist(pick, v) - (k > 1 ? dist(u, v) : 0.0);
      if (cost < best_cost) {
        best_cost = cost;
        best_pos = i + 1;
      }
    }
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(best_pos), static_cast<int>(pick));
    used[pick] = 1;
    absorb(pick);
  }
  return order;
}

}  // namespace

Tour initial_tour(const Instance& inst, Metric m, InitRule rule, std::uint64_t seed) {
  const std::size_t n = inst.size();
  require(n >= 3, "initial_tour needs n >= 3");
  std::vector<int> order;
  switch (rule) {
    case InitRule::random: {
      order.resize(n);
      std::iota(order.begin(), order.end(), 0);
      Rng rng(seed);
      for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_index(i + 1)]);
      break;
    }
    case InitRule::nearest_neighbor:
      order = nearest_neighbor_order(inst.points, m);
      break;
    case InitRule::greedy_insertion:
      order = nearest_insertion_order(inst.points, m);
      break;
  }
  return Tour(std::move(order), inst.points, m);
}

std::optional<TwoChange> find_improving(const Tour& tour, const Instance& inst, Metric m,
                                        Pivot pivot, double eps, Rng* rng, kernels::Exec exec) {
  require(tour.size() == inst.size(), "tour size does not match the instance");
  const auto& order = tour.order();
  const std::size_t n = order.size();
  const PointSet& pts = inst.points;
  auto make = [&](std::size_t i, std::size_t j, double g) {
    return TwoChange{order[i], order[i + 1], order[j], order[j + 1 == n ? 0 : j + 1], g};
  };
  if (n < 4) return std::nullopt;
  switch (pivot) {
    case Pivot::best: {
      const auto hit = kernels::best_edge_pair(order, pts, m, eps, exec);
      if (!hit) return std::nullopt;
      return make(hit->i, hit->j, hit->gain);
    }
    case Pivot::first: {
      for (std::size_t i = 0; i + 2 < n; ++i) {
        const auto a = static_cast<std::size_t>(order[i]);
        const auto b = static_cast<std::size_t>(order[i + 1]);
        for (std::size_t j = i + 2; j < n; ++j) {
          if (i == 0 && j == n - 1) continue;
          const auto c = static_cast<std::size_t>(order[j]);
          const auto d = static_cast<std::size_t>(order[j + 1 == n ? 0 : j + 1]);
          const double g = quad_gain(pts, m, a, b, c, d);
          if (g > eps) return make(i, j, g);
        }
      }
      return std::nullopt;
    }
    case Pivot::random: {
      require(rng != nullptr, "pivot=random needs a random stream");
      std::vector<std::pair<std::size_t, std::size_t>> improving;
      std::vector<double> gains;
      for (std::size_t i = 0; i + 2 < n; ++i) {
        const auto a = static_cast<std::size_t>(order[i]);
        const auto b = static_cast<std::size_t>(order[i + 1]);
        for (std::size_t j = i + 2; j < n; ++j) {
          if (i == 0 && j == n - 1) continue;
          const auto c = static_cast<std::size_t>(order[j]);
          const auto d = static_cast<std::size_t>(order[j + 1 == n ? 0 : j + 1]);
          const double g = quad_gain(pts, m, a, b, c, d);
          if (g > eps) {
            improving.emplace_back(i, j);
            gains.push_back(g);
          }
        }
      }
      if (improving.empty()) return std::nullopt;
      const std::size_t k = rng->uniform_index(improving.size());
      return make(improving[k].first, improving[k].second, gains[k]);
    }
  }
  return std::nullopt;
}

Tour apply_two_change(const Tour& tour, const TwoChange& change) {
  Tour out = tour;
  out.apply(change);
  return out;
}

RunRecord run_two_opt(const Instance& inst, Metric m, const RunOptions& opts) {
  require(inst.size() >= 3, "run_two_opt needs n >= 3");
  require(opts.eps >= 0.0, "eps must be >= 0");
  RunRecord rec;
  rec.seed = opts.seed;
  rec.metric = m;
  rec.pivot = opts.pivot;
  rec.init = opts.init;
  rec.eps = opts.eps;
  rec.changes_recorded = opts.record_changes;

  Tour tour = initial_tour(inst, m, opts.init, derive_seed(opts.seed, 0));
  Rng pivot_rng(derive_seed(opts.seed, 1));
  rec.initial_length = tour.cached_length();
  rec.initial_tour = tour.order();

  while (true) {
    const auto change = find_improving(tour, inst, m, opts.pivot, opts.eps, &pivot_rng, opts.exec);
    if (!change) {
      rec.converged = true;
      break;
    }
    if (rec.iterations == opts.max_iter) break;
    tour.apply(*change);
    ++rec.iterations;
    rec.min_gain_observed = rec.min_gain_observed ? std::min(*rec.min_gain_observed, change->gain)
                                                  : change->gain;
    if (opts.record_changes) rec.changes.push_back(*change);
  }
  rec.final_length = tour_length(tour.order(), inst.points, m);
  rec.final_tour = tour.order();
  return rec;
}

std::optional<double> min_improvement(const Instance& inst, Metric m, double eps,
                                      kernels::Exec exec) {
  require(inst.size() >= 4, "min_improvement needs n >= 4 (no 2-change exists otherwise)");
  return kernels::min_quad_gain(inst.points, m, eps, exec);
}

nlohmann::json two_change_to_json(const TwoChange& c) {
  return {{"removed", {{c.a, c.b}, {c.c, c.d}}}, {"added", {{c.a, c.c}, {c.b, c.d}}}, {"gain", c.gain}};
}

TwoChange two_change_from_json(const nlohmann::json& j) {
  const auto removed = j.at("removed").get<std::vector<std::array<int, 2>>>();
  require(removed.size() == 2, "a 2-change removes exactly two edges");
  TwoChange c{removed[0][0], removed[0][1], removed[1][0], removed[1][1], j.at("gain").get<double>()};
  return c;
}

nlohmann::json run_record_to_json(const RunRecord& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["metric"] = metric_name(r.metric);
  j["pivot"] = pivot_name(r.pivot);
  j["init"] = init_rule_name(r.init);
  j["eps"] = r.eps;
  j["initial_length"] = r.initial_length;
  j["final_length"] = r.final_length;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["min_gain_observed"] = r.min_gain_observed ? nlohmann::json(*r.min_gain_observed) : nlohmann::json();
  j["final_tour"] = r.final_tour;
  if (r.changes_recorded) {
    auto arr = nlohmann::json::array();
    for (const auto& c : r.changes) arr.push_back(two_change_to_json(c));
    j["changes"] = std::move(arr);
  }
  return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  try {
    RunRecord r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.metric = parse_metric(j.at("metric").get<std::string>());
    r.pivot = parse_pivot(j.at("pivot").get<std::string>());
    r.init = parse_init_rule(j.at("init").get<std::string>());
    r.eps = j.at("eps").get<double>();
    r.initial_length = j.at("initial_length").get<double>();
    r.final_length = j.at("final_length").get<double>();
    r.iterations = j.at("iterations").get<std::size_t>();
    r.converged = j.at("converged").get<bool>();
    if (!j.at("min_gain_observed").is_null()) r.min_gain_observed = j["min_gain_observed"].get<double>();
    r.final_tour = j.at("final_tour").get<std::vector<int>>();
    if (j.contains("changes")) {
      r.changes_recorded = true;
      for (const auto& c : j["changes"]) r.changes.push_back(two_change_from_json(c));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail_validation(std::string("malformed run record: ") + e.what());
  }
}

}  // namespace twopt
