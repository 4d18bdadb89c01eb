#include "twopt/linked.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

namespace twopt {

namespace {

bool contains(const std::array<Edge, 2>& edges, Edge e) { return edges[0] == e || edges[1] == e; }

// Classifies with `first` adding `shared` and `second` removing it.
LinkedPairType classify_oriented(const TwoChange& first, const TwoChange& second, Edge shared) {
  int v1, v2, v3, v4;
  if (Edge::of(first.a, first.c) == shared) {
    v1 = first.a; v2 = first.b; v3 = first.c; v4 = first.d;
  } else {
    v1 = first.b; v2 = first.a; v3 = first.d; v4 = first.c;
  }
  const auto removed = second.removed();
  const Edge other = removed[0] == shared ? removed[1] : removed[0];
  const bool has2 = other.touches(v2);
  const bool has4 = other.touches(v4);
  if (has2 && has4) return LinkedPairType::type2;
  if (!has2 && !has4) return LinkedPairType::type0;
  if (has4) {
    std::swap(v1, v3);
    std::swap(v2, v4);
  }
  const int v5 = other.u == v2 ? other.v : other.u;
  const auto added = second.added();
  if (contains(added, Edge::of(v1, v5)) && contains(added, Edge::of(v2, v3))) {
    return LinkedPairType::type1a;
  }
  if (contains(added, Edge::of(v1, v2)) && contains(added, Edge::of(v3, v5))) {
    return LinkedPairType::type1b;
  }
  // Not reachable for a well-formed 2-change; count it as the generic case.
  return LinkedPairType::type0;
}

// For each change, the later and earlier changes it shares an added/removed edge with.
std::vector<std::vector<std::size_t>> linkage_candidates(std::span<const TwoChange> changes) {
  std::map<Edge, std::vector<std::size_t>> adders;
  std::map<Edge, std::vector<std::size_t>> removers;
  for (std::size_t i = 0; i < changes.size(); ++i) {
    for (Edge e : changes[i].added()) adders[e].push_back(i);
    for (Edge e : changes[i].removed()) removers[e].push_back(i);
  }
  std::vector<std::set<std::size_t>> sets(changes.size());
  for (const auto& [edge, add_list] : adders) {
    const auto it = removers.find(edge);
    if (it == removers.end()) continue;
    for (std::size_t i : add_list) {
      for (std::size_t j : it->second) {
        if (i == j) continue;
        sets[i].insert(j);
        sets[j].insert(i);
      }
    }
  }
  std::vector<std::vector<std::size_t>> out(changes.size());
  for (std::size_t i = 0; i < changes.size(); ++i) out[i].assign(sets[i].begin(), sets[i].end());
  return out;
}

}  // namespace

std::string_view linked_pair_type_name(LinkedPairType t) {
  switch (t) {
    case LinkedPairType::type0: return "type0";
    case LinkedPairType::type1a: return "type1a";
    case LinkedPairType::type1b: return "type1b";
    case LinkedPairType::type2: return "type2";
    case LinkedPairType::not_linked: return "not_linked";
  }
  return "?";
}

LinkedPairType classify_linked_pair(const TwoChange& c1, const TwoChange& c2) {
  for (Edge e : c1.added()) {
    if (contains(c2.removed(), e)) return classify_oriented(c1, c2, e);
  }
  for (Edge e : c2.added()) {
    if (contains(c1.removed(), e)) return classify_oriented(c2, c1, e);
  }
  return LinkedPairType::not_linked;
}

std::size_t linked_pair_bound(std::size_t t, std::size_t n) {
  // ceil(t/7 - 3n/28) = ceil((4t - 3n) / 28), computed in integers.
  const long long num = 4LL * static_cast<long long>(t) - 3LL * static_cast<long long>(n);
  if (num <= 0) return 0;
  return static_cast<std::size_t>((num + 27) / 28);
}

DisjointLinkedPairs greedy_linked_pairs(std::span<const TwoChange> changes) {
  const auto candidates = linkage_candidates(changes);
  DisjointLinkedPairs out;
  std::vector<char> used(changes.size(), 0);
  for (std::size_t i = 0; i < changes.size(); ++i) {
    if (used[i]) continue;
    for (std::size_t j : candidates[i]) {
      if (j <= i || used[j]) continue;
      const auto type = classify_linked_pair(changes[i], changes[j]);
      if (!is_type01(type)) continue;
      used[i] = used[j] = 1;
      out.pairs.push_back({i, j, type});
      break;
    }
  }
  return out;
}

DisjointLinkedPairs max_linked_pairs(std::span<const TwoChange> changes) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  const std::size_t t = changes.size();
  Graph g(t);
  const auto candidates = linkage_candidates(changes);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j : candidates[i]) {
      if (j > i && is_type01(classify_linked_pair(changes[i], changes[j]))) boost::add_edge(i, j, g);
    }
  }
  std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(t);
  boost::edmonds_maximum_cardinality_matching(g, &mate[0]);
  DisjointLinkedPairs out;
  out.used_matching = true;
  const auto null_vertex = boost::graph_traits<Graph>::null_vertex();
  for (std::size_t i = 0; i < t; ++i) {
    if (mate[i] != null_vertex && mate[i] > i) {
      out.pairs.push_back({i, mate[i], classify_linked_pair(changes[i], changes[mate[i]])});
    }
  }
  return out;
}

DisjointLinkedPairs count_disjoint_linked_pairs(std::span<const TwoChange> changes, std::size_t n,
                                                std::size_t matching_limit) {
  auto greedy = greedy_linked_pairs(changes);
  if (n == 0 || changes.size() > matching_limit) return greedy;
  if (greedy.count() >= linked_pair_bound(changes.size(), n)) return greedy;
  auto exact = max_linked_pairs(changes);
  return exact.count() > greedy.count() ? exact : greedy;
}

bool is_valid_certificate(std::span<const TwoChange> changes, const DisjointLinkedPairs& cert) {
  std::vector<char> used(changes.size(), 0);
  for (const auto& p : cert.pairs) {
    if (p.first >= changes.size() || p.second >= changes.size() || p.first == p.second) return false;
    if (used[p.first] || used[p.second]) return false;
    used[p.first] = used[p.second] = 1;
    if (!is_type01(classify_linked_pair(changes[p.first], changes[p.second]))) return false;
  }
  return true;
}

}  // namespace twopt
