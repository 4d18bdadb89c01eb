#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "twopt/error.hpp"
#include "twopt/kernels.hpp"

namespace twopt::kernels {

namespace omp {

namespace {

// Larger gain wins; equal gains go to the lexicographically smaller (i, j),
// which is what the serial scan keeps.
bool better(const PairScan& x, const std::optional<PairScan>& y) {
  if (!y) return true;
  if (x.gain != y->gain) return x.gain > y->gain;
  return x.i < y->i || (x.i == y->i && x.j < y->j);
}

}  // namespace

std::optional<PairScan> best_edge_pair(std::span<const int> order, const PointSet& pts, Metric m,
                                       double eps) {
  const std::size_t n = order.size();
  std::optional<PairScan> best;
  if (n < 4) return best;
  const auto rows = static_cast<std::ptrdiff_t>(n - 2);
#pragma omp parallel
  {
    std::optional<PairScan> local;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      const auto a = static_cast<std::size_t>(order[i]);
      const auto b = static_cast<std::size_t>(order[i + 1]);
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        const auto c = static_cast<std::size_t>(order[j]);
        const auto d = static_cast<std::size_t>(order[j + 1 == n ? 0 : j + 1]);
        const double g = quad_gain(pts, m, a, b, c, d);
        if (g > eps && (!local || g > local->gain)) local = PairScan{g, i, j};
      }
    }
#pragma omp critical(twopt_best_edge_pair)
    {
      if (local && better(*local, best)) best = local;
    }
  }
  return best;
}

std::optional<double> min_quad_gain(const PointSet& pts, Metric m, double eps) {
  const auto n = static_cast<std::ptrdiff_t>(pts.size());
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(dynamic, 1) reduction(min : best)
  for (std::ptrdiff_t aa = 0; aa < n; ++aa) {
    const auto a = static_cast<std::size_t>(aa);
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t b = a + 1; b < un; ++b) {
      for (std::size_t c = a + 1; c < un; ++c) {
        if (c == b) continue;
        for (std::size_t d = c + 1; d < un; ++d) {
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
  in_tree[0] = 1;
  std::size_t current = 0;
  std::size_t next = n;
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
  {
    for (std::size_t added = 1; added < n; ++added) {
      std::size_t local = n;
#pragma omp for schedule(static)
      for (std::ptrdiff_t vv = 0; vv < sn; ++vv) {
        const auto v = static_cast<std::size_t>(vv);
        if (in_tree[v]) continue;
        const double dv = distance_unchecked(pts[current], pts[v], m);
        if (dv < key[v]) {
          key[v] = dv;
          out.parent[v] = static_cast<int>(current);
        }
        if (local == n || key[v] < key[local]) local = v;
      }
#pragma omp critical(twopt_mst_merge)
      {
        if (local != n &&
            (next == n || key[local] < key[next] || (key[local] == key[next] && local < next))) {
          next = local;
        }
      }
#pragma omp barrier
#pragma omp single
      {
        in_tree[next] = 1;
        out.weight += key[next];
        current = next;
        next = n;
      }
    }
  }
  return out;
}

std::uint64_t mc_count(std::uint64_t samples, std::uint64_t seed, const ChunkCounter& fn) {
  const auto chunks = static_cast<std::int64_t>((samples + kMcChunk - 1) / kMcChunk);
  std::uint64_t hits = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : hits)
  for (std::int64_t k = 0; k < chunks; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    Rng rng(derive_seed(seed, uk));
    hits += fn(rng, std::min(kMcChunk, samples - uk * kMcChunk));
  }
  return hits;
}

std::vector<double> mc_fill(std::uint64_t samples, std::uint64_t seed, const ChunkFiller& fn) {
  std::vector<double> out(samples);
  const auto chunks = static_cast<std::int64_t>((samples + kMcChunk - 1) / kMcChunk);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < chunks; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    Rng rng(derive_seed(seed, uk));
    const std::uint64_t begin = uk * kMcChunk;
    fn(rng, std::span<double>(out).subspan(begin, std::min(kMcChunk, samples - begin)));
  }
  return out;
}

}  // namespace omp

std::optional<PairScan> best_edge_pair(std::span<const int> order, const PointSet& pts, Metric m,
                                       double eps, Exec exec) {
  return exec == Exec::serial ? serial::best_edge_pair(order, pts, m, eps)
                              : omp::best_edge_pair(order, pts, m, eps);
}

std::optional<double> min_quad_gain(const PointSet& pts, Metric m, double eps, Exec exec) {
  return exec == Exec::serial ? serial::min_quad_gain(pts, m, eps)
                              : omp::min_quad_gain(pts, m, eps);
}

MstResult mst(const PointSet& pts, Metric m, Exec exec) {
  return exec == Exec::serial ? serial::mst(pts, m) : omp::mst(pts, m);
}

std::uint64_t mc_count(std::uint64_t samples, std::uint64_t seed, const ChunkCounter& fn,
                       Exec exec) {
  return exec == Exec::serial ? serial::mc_count(samples, seed, fn)
                              : omp::mc_count(samples, seed, fn);
}

std::vector<double> mc_fill(std::uint64_t samples, std::uint64_t seed, const ChunkFiller& fn,
                            Exec exec) {
  return exec == Exec::serial ? serial::mc_fill(samples, seed, fn)
                              : omp::mc_fill(samples, seed, fn);
}

int default_threads() {
  if (const char* env = std::getenv("TWOPT_THREADS"); env != nullptr && *env != '\0') {
    try {
      const int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
    fail_validation(std::string("TWOPT_THREADS must be a positive integer, got '") + env + "'");
  }
  return omp_get_num_procs();
}

void set_threads(int threads) {
  require(threads >= 1, "thread count must be >= 1");
  omp_set_num_threads(threads);
}

}  // namespace twopt::kernels
