#include "graph_suite.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "echonet/centrality.hpp"
#include "oracles.hpp"

namespace echonet::testing {
namespace {

template <typename T>
std::string mismatch(const std::string& what, T got, T want) {
  std::ostringstream os;
  os.precision(17);
  os << what << ": got " << got << ", want " << want;
  return os.str();
}

// Component partition as the smallest-index label of each node.
std::vector<int> labels_from(const EngagementGraph& g, ComponentMode mode) {
  std::vector<int> labels(g.node_count(), -1);
  for (const auto& comp : connected_components(g, mode)) {
    int smallest = static_cast<int>(g.node_count());
    for (const auto& id : comp) smallest = std::min(smallest, static_cast<int>(*g.index_of(id)));
    for (const auto& id : comp) labels[*g.index_of(id)] = smallest;
  }
  return labels;
}

}  // namespace

SuiteResult compare_with_oracles(const EngagementGraph& g, double tolerance, bool weighted) {
  SuiteResult r;
  const auto adj = oracle::adjacency(g);
  const auto w = oracle::weights(g);
  const std::size_t n = g.node_count();

  if (g.edge_count() > 0) {
    const EngagementGraph core = without_singletons(g);
    const auto core_adj = oracle::adjacency(core);
    const NetworkStats s = network_stats(g);
    std::size_t singletons = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool any = false;
      for (std::size_t j = 0; j < n; ++j) any |= adj[i][j] || adj[j][i];
      singletons += !any;
    }
    std::size_t arcs = 0;
    for (const auto& row : adj)
      for (int a : row) arcs += a;
    if (s.n_singletons != singletons) return {mismatch("n_singletons", s.n_singletons, singletons)};
    if (s.n_nodes != n - singletons) return {mismatch("n_nodes", s.n_nodes, n - singletons)};
    if (s.n_edges != arcs) return {mismatch("n_edges", s.n_edges, arcs)};
    const double want_density =
        static_cast<double>(arcs) / (static_cast<double>(s.n_nodes) * static_cast<double>(s.n_nodes - 1));
    if (std::abs(s.density - want_density) > tolerance) return {mismatch("density", s.density, want_density)};
    if (s.diameter != static_cast<std::size_t>(oracle::diameter(core_adj)))
      return {mismatch("diameter", s.diameter, static_cast<std::size_t>(oracle::diameter(core_adj)))};
    if (s.n_triangles != oracle::triangle_count(core_adj))
      return {mismatch("n_triangles", s.n_triangles, oracle::triangle_count(core_adj))};
    std::uint64_t max_t = 0;
    for (auto t : oracle::triangles_per_node(core_adj)) max_t = std::max(max_t, t);
    if (s.max_triangles_node != max_t) return {mismatch("max_triangles", s.max_triangles_node, max_t)};
    const auto strong = oracle::label_count(oracle::strong_labels(core_adj));
    const auto weak = oracle::label_count(oracle::weak_labels(core_adj));
    if (s.n_strong_cc != strong) return {mismatch("n_strong_cc", s.n_strong_cc, strong)};
    if (s.n_weak_cc != weak) return {mismatch("n_weak_cc", s.n_weak_cc, weak)};
  }

  if (labels_from(g, ComponentMode::Weak) != oracle::weak_labels(adj)) return {"weak component partition differs"};
  if (labels_from(g, ComponentMode::Strong) != oracle::strong_labels(adj))
    return {"strong component partition differs"};

  CentralityOptions opts;
  opts.weighted = weighted;
  std::map<CentralityMeasure, std::vector<double>> want;
  std::vector<double> in(n, 0.0), out(n, 0.0), total(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = weighted ? w[i][j] : adj[i][j];
      out[i] += v;
      in[j] += v;
    }
  for (std::size_t i = 0; i < n; ++i) total[i] = in[i] + out[i];
  want[CentralityMeasure::InDeg] = in;
  want[CentralityMeasure::OutDeg] = out;
  want[CentralityMeasure::TotalDeg] = total;
  want[CentralityMeasure::Betweenness] = oracle::betweenness(adj);
  want[CentralityMeasure::Closeness] = oracle::harmonic_closeness(adj);
  oracle::Weights ew = w;
  if (!weighted)
    for (auto& row : ew)
      for (auto& x : row) x = x != 0.0 ? 1.0 : 0.0;
  want[CentralityMeasure::Eigenvector] = oracle::eigenvector(oracle::undirected_view(w, weighted));
  want[CentralityMeasure::PageRank] = oracle::pagerank(ew, opts.pagerank_damping);

  for (auto m : kAllMeasures) {
    const CentralityResult got = centrality(g, m, opts);
    if (got.scores.size() != n) return {"score vector size for " + std::string(to_string(m))};
    const bool integral = m == CentralityMeasure::InDeg || m == CentralityMeasure::OutDeg ||
                          m == CentralityMeasure::TotalDeg;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = std::abs(got.scores[i] - want[m][i]);
      if (integral) {
        if (diff != 0.0) return {mismatch(std::string(to_string(m)) + " at " + g.node(i), got.scores[i], want[m][i])};
      } else {
        const double scale = 1.0;
        r.max_real_error = std::max(r.max_real_error, diff / scale);
        if (diff > tolerance * scale)
          return {mismatch(std::string(to_string(m)) + " at " + g.node(i), got.scores[i], want[m][i]), r.max_real_error};
      }
    }
  }
  return r;
}

}  // namespace echonet::testing
