#include "echonet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "echonet/error.hpp"

namespace echonet {
namespace {

using kernels::NodeId;

std::vector<double> degrees(const EngagementGraph& g, CentralityMeasure m, bool weighted) {
  const std::size_t n = g.node_count();
  std::vector<double> d(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    double in = 0.0, out = 0.0;
    if (weighted) {
      for (auto w : g.in_weights(v)) in += static_cast<double>(w);
      for (auto w : g.out_weights(v)) out += static_cast<double>(w);
    } else {
      in = static_cast<double>(g.in_degree(v));
      out = static_cast<double>(g.out_degree(v));
    }
    d[v] = m == CentralityMeasure::InDeg ? in : m == CentralityMeasure::OutDeg ? out : in + out;
  }
  return d;
}

std::vector<double> eigenvector(const EngagementGraph& g, const CentralityOptions& opts) {
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  // Symmetric weights of the undirected view.
  std::vector<std::map<NodeId, double>> rows(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto targets = g.out_adjacency().neighbors(v);
    const auto weights = g.out_weights(v);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double w = opts.weighted ? static_cast<double>(weights[i]) : 1.0;
      if (opts.weighted) {
        rows[v][targets[i]] += w;
        rows[targets[i]][v] += w;
      } else {
        rows[v][targets[i]] = 1.0;
        rows[targets[i]][v] = 1.0;
      }
    }
  }
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n);
  double previous_change = 0.0;
  for (std::size_t iter = 1; iter <= opts.max_iterations; ++iter) {
    double norm = 0.0;
#pragma omp parallel for reduction(+ : norm) schedule(static)
    for (std::size_t v = 0; v < n; ++v) {
      double acc = x[v];
      for (const auto& [u, w] : rows[v]) acc += w * x[u];
      next[v] = acc;
      norm += acc * acc;
    }
    norm = std::sqrt(norm);
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= norm;
      change = std::max(change, std::abs(next[v] - x[v]));
    }
    x.swap(next);
    // Geometric tail estimate of the remaining error from the contraction
    // ratio of successive steps.
    if (change <= 64.0 * std::numeric_limits<double>::epsilon()) return x;
    if (change < opts.tolerance && previous_change > 0.0) {
      const double ratio = change / previous_change;
      if (ratio < 1.0 && change * ratio / (1.0 - ratio) < opts.tolerance) return x;
    }
    previous_change = change;
  }
  throw ConvergenceError("eigenvector centrality", opts.max_iterations);
}

std::vector<double> pagerank(const EngagementGraph& g, const CentralityOptions& opts) {
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  const double d = opts.pagerank_damping;
  std::vector<double> out_total(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    if (opts.weighted) {
      for (auto w : g.out_weights(v)) out_total[v] += static_cast<double>(w);
    } else {
      out_total[v] = static_cast<double>(g.out_degree(v));
    }
  }
  std::vector<double> x(n, 1.0 / n), next(n);
  for (std::size_t iter = 1; iter <= opts.max_iterations; ++iter) {
    double dangling = 0.0;
    for (NodeId v = 0; v < n; ++v)
      if (out_total[v] == 0.0) dangling += x[v];
    const double base = (1.0 - d) / n + d * dangling / n;
    double change = 0.0;
#pragma omp parallel for reduction(+ : change) schedule(static)
    for (std::size_t v = 0; v < n; ++v) {
      const auto sources = g.in_adjacency().neighbors(static_cast<NodeId>(v));
      const auto weights = g.in_weights(static_cast<NodeId>(v));
      double acc = 0.0;
      for (std::size_t i = 0; i < sources.size(); ++i) {
        const double w = opts.weighted ? static_cast<double>(weights[i]) : 1.0;
        acc += x[sources[i]] * w / out_total[sources[i]];
      }
      next[v] = base + d * acc;
      change += std::abs(next[v] - x[v]);
    }
    x.swap(next);
    if (change < opts.tolerance) return x;
  }
  throw ConvergenceError("pagerank", opts.max_iterations);
}

}  // namespace

std::string_view to_string(CentralityMeasure m) {
  switch (m) {
    case CentralityMeasure::InDeg: return "in_degree";
    case CentralityMeasure::OutDeg: return "out_degree";
    case CentralityMeasure::TotalDeg: return "total_degree";
    case CentralityMeasure::Betweenness: return "betweenness";
    case CentralityMeasure::Eigenvector: return "eigenvector";
    case CentralityMeasure::Closeness: return "closeness";
    case CentralityMeasure::PageRank: return "pagerank";
  }
  return "?";
}

CentralityMeasure parse_measure(std::string_view text) {
  for (auto m : kAllMeasures)
    if (to_string(m) == text) return m;
  throw ConfigError("unknown centrality measure '" + std::string(text) + "'");
}

double CentralityResult::score_of(std::string_view user) const {
  auto it = std::lower_bound(users.begin(), users.end(), user);
  if (it == users.end() || *it != user) return 0.0;
  return scores[it - users.begin()];
}

CentralityResult centrality(const EngagementGraph& g, CentralityMeasure measure,
                            const CentralityOptions& opts) {
  CentralityResult r;
  r.measure = measure;
  r.users = g.nodes();
  switch (measure) {
    case CentralityMeasure::InDeg:
    case CentralityMeasure::OutDeg:
    case CentralityMeasure::TotalDeg:
      r.scores = degrees(g, measure, opts.weighted);
      break;
    case CentralityMeasure::Betweenness:
      r.scores = kernels::betweenness_parallel(g.out_adjacency());
      break;
    case CentralityMeasure::Closeness:
      r.scores = kernels::harmonic_closeness_parallel(g.out_adjacency());
      break;
    case CentralityMeasure::Eigenvector:
      r.scores = eigenvector(g, opts);
      break;
    case CentralityMeasure::PageRank:
      r.scores = pagerank(g, opts);
      break;
  }
  return r;
}

int GeneralizedCentrality::score_of(std::string_view user) const {
  for (const auto& e : entries)
    if (e.user == user) return e.score;
  return 0;
}

std::vector<std::string> top_k_users(const CentralityResult& result, std::size_t k) {
  std::vector<double> positive;
  for (double s : result.scores)
    if (s > 0.0) positive.push_back(s);
  if (positive.empty() || k == 0) return {};
  std::sort(positive.begin(), positive.end(), std::greater<>());
  const double kth = positive[std::min(k, positive.size()) - 1];
  const double cutoff = kth - kTieTolerance * std::max(1.0, std::abs(kth));
  std::vector<std::string> users;
  for (std::size_t i = 0; i < result.scores.size(); ++i)
    if (result.scores[i] > 0.0 && result.scores[i] >= cutoff) users.push_back(result.users[i]);
  return users;
}

GeneralizedCentrality generalized_centrality(std::span<const EngagementGraph* const> graphs, long long k,
                                             const CentralityOptions& opts) {
  if (k <= 0) throw ConfigError("generalized centrality needs k >= 1");
  std::set<Semantics> seen;
  for (const auto* g : graphs)
    if (!seen.insert(g->semantics()).second)
      throw ConfigError("generalized centrality graphs must carry distinct semantics");

  std::map<std::string, int> counts;
  for (const auto* g : graphs) {
    for (auto m : kAllMeasures) {
      for (const auto& u : top_k_users(centrality(*g, m, opts), static_cast<std::size_t>(k))) ++counts[u];
    }
  }
  GeneralizedCentrality gc;
  gc.top_k = static_cast<std::size_t>(k);
  for (const auto& [u, c] : counts) gc.entries.push_back({u, c});
  std::stable_sort(gc.entries.begin(), gc.entries.end(),
                   [](const auto& a, const auto& b) { return a.score > b.score; });
  return gc;
}

}  // namespace echonet
