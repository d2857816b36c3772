#pragma once

// Data-parallel graph kernels. Every kernel ships as an OpenMP version and a
// plain serial version; the serial one is the reference the tests and the
// benchmarks compare against. Both operate on unweighted adjacency.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace echonet::kernels {

using NodeId = std::uint32_t;

// Compressed sparse rows: neighbors of v are targets[offsets[v] .. offsets[v+1]).
struct Csr {
  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> targets;

  std::size_t node_count() const { return offsets.size() - 1; }
  std::size_t arc_count() const { return targets.size(); }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }
};

// Builds CSR from (src, dst) pairs; rows are sorted and duplicates removed.
Csr make_csr(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> arcs);

// Brandes accumulation over ordered pairs (s, t), s != t, unnormalized.
std::vector<double> betweenness_serial(const Csr& out);
std::vector<double> betweenness_parallel(const Csr& out);

// Sum over reachable u != v of 1 / d(v, u), following out-arcs.
std::vector<double> harmonic_closeness_serial(const Csr& out);
std::vector<double> harmonic_closeness_parallel(const Csr& out);

// Largest finite BFS distance from any node. Pass a symmetric adjacency to
// get the diameter within connected components of the undirected view.
std::size_t max_eccentricity_serial(const Csr& adj);
std::size_t max_eccentricity_parallel(const Csr& adj);

// Triangles through each node of a simple undirected graph. `adj` must be
// symmetric with sorted rows and no self-loops.
std::vector<std::uint64_t> triangles_per_node_serial(const Csr& adj);
std::vector<std::uint64_t> triangles_per_node_parallel(const Csr& adj);

// Index of the nearest center (squared Euclidean) for each row of `points`
// (row-major, `dim` columns); writes squared distances to `dist2`.
void assign_nearest_serial(std::span<const double> points, std::span<const double> centers,
                           std::size_t dim, std::span<int> labels, std::span<double> dist2);
void assign_nearest_parallel(std::span<const double> points, std::span<const double> centers,
                             std::size_t dim, std::span<int> labels, std::span<double> dist2);

}  // namespace echonet::kernels
