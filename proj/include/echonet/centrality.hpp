#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "echonet/graph.hpp"

namespace echonet {

enum class CentralityMeasure { InDeg, OutDeg, TotalDeg, Betweenness, Eigenvector, Closeness, PageRank };

inline constexpr std::array<CentralityMeasure, 7> kAllMeasures = {
    CentralityMeasure::InDeg,       CentralityMeasure::OutDeg,      CentralityMeasure::TotalDeg,
    CentralityMeasure::Betweenness, CentralityMeasure::Eigenvector, CentralityMeasure::Closeness,
    CentralityMeasure::PageRank};

std::string_view to_string(CentralityMeasure m);
CentralityMeasure parse_measure(std::string_view text);  // throws ConfigError

struct CentralityOptions {
  // Degrees become weight sums; eigenvector and PageRank use edge weights.
  // Betweenness and closeness always count hops.
  bool weighted = false;
  double pagerank_damping = 0.85;
  double tolerance = 1e-10;
  std::size_t max_iterations = 100000;
};

// Scores aligned with `users` (the graph's node order).
struct CentralityResult {
  CentralityMeasure measure = CentralityMeasure::InDeg;
  std::vector<std::string> users;
  std::vector<double> scores;

  double score_of(std::string_view user) const;  // 0 for unknown users
};

// Betweenness: exact Brandes on the unweighted directed graph (ordered
// pairs, unnormalized). Closeness: harmonic, over out-distances.
// Eigenvector: power iteration on (I + A) of the undirected view,
// unit L2 norm. PageRank: dangling mass spread uniformly.
// Throws ConvergenceError if an iterative measure exceeds max_iterations.
CentralityResult centrality(const EngagementGraph& g, CentralityMeasure measure,
                            const CentralityOptions& opts = {});

struct GeneralizedEntry {
  std::string user;
  int score = 0;  // in [0, 21]
};

struct GeneralizedCentrality {
  std::size_t top_k = 0;
  std::vector<GeneralizedEntry> entries;  // score descending, then user id

  int score_of(std::string_view user) const;
};

// Users with a positive score among the top k of `result`, including every
// user tied with the k-th score. Scores within kTieTolerance (relative) of
// the k-th score count as tied. Ascending id order.
inline constexpr double kTieTolerance = 1e-12;
std::vector<std::string> top_k_users(const CentralityResult& result, std::size_t k);

// Counts, for every user, the (semantics, measure) pairs in which the user is
// among the top-k. Graphs must carry distinct semantics. Throws ConfigError
// when k == 0 or semantics repeat.
GeneralizedCentrality generalized_centrality(std::span<const EngagementGraph* const> graphs, long long k,
                                             const CentralityOptions& opts = {});

}  // namespace echonet
