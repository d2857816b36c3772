#include "echonet/kernels.hpp"

#include <algorithm>
#include <limits>

#include <omp.h>

namespace echonet::kernels {
namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

// Reusable buffers for one single-source Brandes pass.
struct BrandesWorkspace {
  explicit BrandesWorkspace(std::size_t n)
      : dist(n, kUnreached), sigma(n, 0.0), delta(n, 0.0), order(), queue() {
    order.reserve(n);
    queue.reserve(n);
  }
  std::vector<std::uint32_t> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<NodeId> order;
  std::vector<NodeId> queue;
};

// Adds the dependencies of source `s` to `acc`. Predecessors are recovered
// from the distance labels, so no per-node lists are kept.
void brandes_source(const Csr& out, NodeId s, BrandesWorkspace& ws, std::vector<double>& acc) {
  ws.order.clear();
  ws.queue.clear();
  ws.dist[s] = 0;
  ws.sigma[s] = 1.0;
  ws.queue.push_back(s);
  for (std::size_t head = 0; head < ws.queue.size(); ++head) {
    const NodeId v = ws.queue[head];
    ws.order.push_back(v);
    for (NodeId w : out.neighbors(v)) {
      if (ws.dist[w] == kUnreached) {
        ws.dist[w] = ws.dist[v] + 1;
        ws.queue.push_back(w);
      }
      if (ws.dist[w] == ws.dist[v] + 1) ws.sigma[w] += ws.sigma[v];
    }
  }
  for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
    const NodeId v = *it;
    for (NodeId w : out.neighbors(v)) {
      if (ws.dist[w] == ws.dist[v] + 1) ws.delta[v] += ws.sigma[v] / ws.sigma[w] * (1.0 + ws.delta[w]);
    }
    if (v != s) acc[v] += ws.delta[v];
  }
  for (NodeId v : ws.order) {
    ws.dist[v] = kUnreached;
    ws.sigma[v] = 0.0;
    ws.delta[v] = 0.0;
  }
}

std::size_t bfs_farthest(const Csr& adj, NodeId s, std::vector<std::uint32_t>& dist,
                         std::vector<NodeId>& queue) {
  queue.clear();
  dist[s] = 0;
  queue.push_back(s);
  std::size_t far = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    far = std::max<std::size_t>(far, dist[v]);
    for (NodeId w : adj.neighbors(v)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  for (NodeId v : queue) dist[v] = kUnreached;
  return far;
}

double bfs_harmonic(const Csr& out, NodeId s, std::vector<std::uint32_t>& dist,
                    std::vector<NodeId>& queue) {
  queue.clear();
  dist[s] = 0;
  queue.push_back(s);
  double sum = 0.0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    if (v != s) sum += 1.0 / dist[v];
    for (NodeId w : out.neighbors(v)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  for (NodeId v : queue) dist[v] = kUnreached;
  return sum;
}

std::uint64_t triangles_at(const Csr& adj, NodeId v) {
  // Edges among the neighbors of v, each found from both ends.
  std::uint64_t twice = 0;
  const auto nv = adj.neighbors(v);
  for (NodeId u : nv) {
    const auto nu = adj.neighbors(u);
    auto a = nv.begin();
    auto b = nu.begin();
    while (a != nv.end() && b != nu.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++twice;
        ++a;
        ++b;
      }
    }
  }
  return twice / 2;
}

void assign_row(std::span<const double> points, std::span<const double> centers, std::size_t dim,
                std::size_t i, std::span<int> labels, std::span<double> dist2) {
  const std::size_t k = centers.size() / dim;
  const double* p = points.data() + i * dim;
  double best = std::numeric_limits<double>::infinity();
  int best_c = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const double* q = centers.data() + c * dim;
    double d = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double diff = p[j] - q[j];
      d += diff * diff;
    }
    if (d < best) {
      best = d;
      best_c = static_cast<int>(c);
    }
  }
  labels[i] = best_c;
  dist2[i] = best;
}

// Fixed number of source chunks so the reduction order, and therefore the
// floating-point result, does not depend on the thread count.
constexpr std::size_t kBetweennessChunks = 64;

}  // namespace

Csr make_csr(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> arcs) {
  std::vector<std::pair<NodeId, NodeId>> sorted(arcs.begin(), arcs.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Csr csr;
  csr.offsets.assign(node_count + 1, 0);
  csr.targets.reserve(sorted.size());
  for (const auto& [s, t] : sorted) {
    ++csr.offsets[s + 1];
    csr.targets.push_back(t);
  }
  for (std::size_t v = 0; v < node_count; ++v) csr.offsets[v + 1] += csr.offsets[v];
  return csr;
}

std::vector<double> betweenness_serial(const Csr& out) {
  const std::size_t n = out.node_count();
  std::vector<double> acc(n, 0.0);
  BrandesWorkspace ws(n);
  for (NodeId s = 0; s < n; ++s) brandes_source(out, s, ws, acc);
  return acc;
}

std::vector<double> betweenness_parallel(const Csr& out) {
  const std::size_t n = out.node_count();
  const std::size_t chunks = std::min(kBetweennessChunks, std::max<std::size_t>(n, 1));
  std::vector<std::vector<double>> partial(chunks);
#pragma omp parallel
  {
    BrandesWorkspace ws(n);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t c = 0; c < chunks; ++c) {
      partial[c].assign(n, 0.0);
      const std::size_t begin = c * n / chunks;
      const std::size_t end = (c + 1) * n / chunks;
      for (std::size_t s = begin; s < end; ++s) brandes_source(out, static_cast<NodeId>(s), ws, partial[c]);
    }
  }
  std::vector<double> acc(n, 0.0);
  for (const auto& p : partial)
    for (std::size_t v = 0; v < n; ++v) acc[v] += p[v];
  return acc;
}

std::vector<double> harmonic_closeness_serial(const Csr& out) {
  const std::size_t n = out.node_count();
  std::vector<double> result(n, 0.0);
  std::vector<std::uint32_t> dist(n, kUnreached);
  std::vector<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) result[s] = bfs_harmonic(out, s, dist, queue);
  return result;
}

std::vector<double> harmonic_closeness_parallel(const Csr& out) {
  const std::size_t n = out.node_count();
  std::vector<double> result(n, 0.0);
#pragma omp parallel
  {
    std::vector<std::uint32_t> dist(n, kUnreached);
    std::vector<NodeId> queue;
#pragma omp for schedule(dynamic, 16)
    for (std::size_t s = 0; s < n; ++s) result[s] = bfs_harmonic(out, static_cast<NodeId>(s), dist, queue);
  }
  return result;
}

std::size_t max_eccentricity_serial(const Csr& adj) {
  const std::size_t n = adj.node_count();
  std::vector<std::uint32_t> dist(n, kUnreached);
  std::vector<NodeId> queue;
  std::size_t best = 0;
  for (NodeId s = 0; s < n; ++s) best = std::max(best, bfs_farthest(adj, s, dist, queue));
  return best;
}

std::size_t max_eccentricity_parallel(const Csr& adj) {
  const std::size_t n = adj.node_count();
  std::size_t best = 0;
#pragma omp parallel reduction(max : best)
  {
    std::vector<std::uint32_t> dist(n, kUnreached);
    std::vector<NodeId> queue;
#pragma omp for schedule(dynamic, 16)
    for (std::size_t s = 0; s < n; ++s)
      best = std::max(best, bfs_farthest(adj, static_cast<NodeId>(s), dist, queue));
  }
  return best;
}

std::vector<std::uint64_t> triangles_per_node_serial(const Csr& adj) {
  std::vector<std::uint64_t> tri(adj.node_count(), 0);
  for (NodeId v = 0; v < adj.node_count(); ++v) tri[v] = triangles_at(adj, v);
  return tri;
}

std::vector<std::uint64_t> triangles_per_node_parallel(const Csr& adj) {
  const std::size_t n = adj.node_count();
  std::vector<std::uint64_t> tri(n, 0);
#pragma omp parallel for schedule(dynamic, 32)
  for (std::size_t v = 0; v < n; ++v) tri[v] = triangles_at(adj, static_cast<NodeId>(v));
  return tri;
}

void assign_nearest_serial(std::span<const double> points, std::span<const double> centers,
                           std::size_t dim, std::span<int> labels, std::span<double> dist2) {
  const std::size_t n = points.size() / dim;
  for (std::size_t i = 0; i < n; ++i) assign_row(points, centers, dim, i, labels, dist2);
}

void assign_nearest_parallel(std::span<const double> points, std::span<const double> centers,
                             std::size_t dim, std::span<int> labels, std::span<double> dist2) {
  const std::size_t n = points.size() / dim;
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) assign_row(points, centers, dim, i, labels, dist2);
}

}  // namespace echonet::kernels
