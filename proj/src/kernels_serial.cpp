#include <algorithm>
#include <limits>

#include "twopt/error.hpp"
#include "twopt/kernels.hpp"

namespace twopt::kernels::serial {

std::optional<PairScan> best_edge_pair(std::span<const int> order, const PointSet& pts, Metric m,
                                       double eps) {
  const std::size_t n = order.size();
  std::optional<PairScan> best;
  if (n < 4) return best;
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const auto a = static_cast<std::size_t>(order[i]);
    const auto b = static_cast<std::size_t>(order[i + 1]);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      const auto c = static_cast<std::size_t>(order[j]);
      const auto d = static_cast<std::size_t>(order[j + 1 == n ? 0 : j + 1]);
      const double g = quad_gain(pts, m, a, b, c, d);
      if (g > eps && (!best || g > best->gain)) best = PairScan{g, i, j};
    }
  }
  return best;
}

std::optional<double> min_quad_gain(const PointSet& pts, Metric m, double eps) {
  const std::size_t n = pts.size();
  double best = std::numeric_limits<double>::infinity();
  // Unordered disjoint edge pairs {a,b} < {c,d} with a < b, c < d, a < c;
  // each admits two reconnections.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = a + 1; c < n; ++c) {
        if (c == b) continue;
        for (std::size_t d = c + 1; d < n; ++d) {
          if (d == b) continue;
          const double g1 = quad_gain(pts, m, a, b, c, d);
          const double g2 = quad_gain(pts, m, a, b, d, c);
          if (g1 > eps) best = std::min(best, g1);
          if (g2 > eps) best = std::min(best, g2);
        }
      }
    }
  }
  if (best == std::numeric_limits<double>::infinity()) return std::nullopt;
  return best;
}

MstResult mst(const PointSet& pts, Metric m) {
  const std::size_t n = pts.size();
  MstResult out;
  out.parent.assign(n, -1);
  if (n == 0) return out;
  std::vector<double> key(n, std::numeric_limits<double>::infinity());
  std::vector<char> in_tree(n, 0);
  std::size_t current = 0;
  in_tree[0] = 1;
  for (std::size_t added = 1; added < n; ++added) {
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double dv = distance_unchecked(pts[current], pts[v], m);
      if (dv < key[v]) {
        key[v] = dv;
        out.parent[v] = static_cast<int>(current);
      }
    }
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (next == n || key[v] < key[next])) next = v;
    }
    in_tree[next] = 1;
    out.weight += key[next];
    current = next;
  }
  return out;
}

std::uint64_t mc_count(std::uint64_t samples, std::uint64_t seed, const ChunkCounter& fn) {
  const std::uint64_t chunks = (samples + kMcChunk - 1) / kMcChunk;
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < chunks; ++k) {
    Rng rng(derive_seed(seed, k));
    hits += fn(rng, std::min(kMcChunk, samples - k * kMcChunk));
  }
  return hits;
}

std::vector<double> mc_fill(std::uint64_t samples, std::uint64_t seed, const ChunkFiller& fn) {
  std::vector<double> out(samples);
  const std::uint64_t chunks = (samples + kMcChunk - 1) / kMcChunk;
  for (std::uint64_t k = 0; k < chunks; ++k) {
    Rng rng(derive_seed(seed, k));
    const std::uint64_t begin = k * kMcChunk;
    fn(rng, std::span<double>(out).subspan(begin, std::min(kMcChunk, samples - begin)));
  }
  return out;
}

}  // namespace twopt::kernels::serial
