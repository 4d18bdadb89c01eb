#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twopt/geometry.hpp"
#include "twopt/instance.hpp"
#include "twopt/kernels.hpp"

namespace twopt {

/// Undirected edge, stored with u <= v.
struct Edge {
  int u = 0;
  int v = 0;

  static Edge of(int a, int b) { return a <= b ? Edge{a, b} : Edge{b, a}; }
  bool touches(int w) const { return u == w || v == w; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Replaces {a,b},{c,d} by {a,c},{b,d}. At application time a->b and c->d run
/// in the same direction around the tour.
struct TwoChange {
  int a = 0;
  int b = 0;
  int c = 0;
  int d = 0;
  double gain = 0.0;

  std::array<Edge, 2> removed() const { return {Edge::of(a, b), Edge::of(c, d)}; }
  std::array<Edge, 2> added() const { return {Edge::of(a, c), Edge::of(b, d)}; }
  /// The change that undoes this one.
  TwoChange inverse() const { return {a, c, b, d, -gain}; }
};

/// Cyclic permutation of 0..n-1 with a position index and a cached length.
class Tour {
 public:
  Tour() = default;
  /// Validates the permutation (n >= 3) and computes the length.
  Tour(std::vector<int> order, const PointSet& pts, Metric m);

  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<int>& order() const noexcept { return order_; }
  int at(std::size_t position) const { return order_[position]; }
  std::size_t position(int v) const { return pos_[static_cast<std::size_t>(v)]; }
  int next(int v) const;
  int prev(int v) const;
  bool has_edge(int u, int v) const;
  double cached_length() const noexcept { return length_; }
  Metric metric() const noexcept { return metric_; }

  /// Rotation starting at vertex 0, oriented toward its smaller neighbour.
  std::vector<int> canonical_order() const;
  bool same_cycle(const Tour& other) const { return canonical_order() == other.canonical_order(); }

  /// Applies `change` in place by reversing the shorter of the two segments
  /// and subtracts its gain from the cached length.
  void apply(const TwoChange& change);

  /// Reverses the cyclic position range [from, to] (inclusive, forward).
  void reverse_range(std::size_t from, std::size_t to);

 private:
  std::vector<int> order_;
  std::vector<std::size_t> pos_;
  double length_ = 0.0;
  Metric metric_ = Metric::euclidean;
};

enum class InitRule { random, nearest_neighbor, greedy_insertion };
enum class Pivot { first, best, random };

std::string_view init_rule_name(InitRule r);
InitRule parse_init_rule(std::string_view s);
std::string_view pivot_name(Pivot p);
Pivot parse_pivot(std::string_view s);

/// Sum of metric distances around the cycle `order`.
double tour_length(std::span<const int> order, const PointSet& pts, Metric m);
double tour_length(const Tour& tour, const Instance& inst, Metric m);

/// random: uniform permutation from `seed`. nearest_neighbor: from vertex 0,
/// always to the closest unvisited vertex (lowest index on ties). greedy_insertion:
/// nearest insertion, adding the unvisited vertex closest to the subtour at its
/// cheapest position, starting from vertex 0 and its nearest neighbour.
Tour initial_tour(const Instance& inst, Metric m, InitRule rule, std::uint64_t seed);

/// Next 2-change with gain > eps, or nothing iff the tour is 2-optimal at eps.
/// first: first improving pair in lexicographic position order (i, j);
/// best: maximum gain, ties by the same order; random: uniform over all
/// improving pairs using `rng` (required for that rule).
std::optional<TwoChange> find_improving(const Tour& tour, const Instance& inst, Metric m,
                                        Pivot pivot, double eps, Rng* rng = nullptr,
                                        kernels::Exec exec = kernels::Exec::parallel);

/// Copying application of `change`; throws if the removed edges are absent or
/// oriented inconsistently.
Tour apply_two_change(const Tour& tour, const TwoChange& change);

struct RunOptions {
  InitRule init = InitRule::random;
  Pivot pivot = Pivot::first;
  double eps = 1e-12;
  std::uint64_t seed = 0;
  std::size_t max_iter = 100'000'000;
  bool record_changes = false;
  kernels::Exec exec = kernels::Exec::parallel;
};

/// One sampled path in the 2-opt state graph.
struct RunRecord {
  std::uint64_t seed = 0;
  Metric metric = Metric::euclidean;
  Pivot pivot = Pivot::first;
  InitRule init = InitRule::random;
  double eps = 1e-12;
  double initial_length = 0.0;
  double final_length = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool changes_recorded = false;
  std::vector<TwoChange> changes;  ///< empty unless recorded
  std::optional<double> min_gain_observed;
  std::vector<int> initial_tour;
  std::vector<int> final_tour;
};

/// Runs 2-opt to a local optimum at tolerance eps. The random init draws from
/// derive_seed(seed, 0) and the random pivot from derive_seed(seed, 1). When the
/// iteration budget runs out the record is flagged non-converged.
RunRecord run_two_opt(const Instance& inst, Metric m, const RunOptions& opts);

/// Smallest gain > eps of any 2-change on the instance, or nothing. Needs n >= 4.
std::optional<double> min_improvement(const Instance& inst, Metric m, double eps = 1e-12,
                                      kernels::Exec exec = kernels::Exec::parallel);

nlohmann::json two_change_to_json(const TwoChange& c);
TwoChange two_change_from_json(const nlohmann::json& j);
/// Changes are written only when the record carries them.
nlohmann::json run_record_to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);

}  // namespace twopt
