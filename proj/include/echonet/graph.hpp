#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "echonet/corpus.hpp"
#include "echonet/kernels.hpp"

namespace echonet {

enum class Semantics { Mention, Reply, Retweet };

std::string_view to_string(Semantics s);
Semantics parse_semantics(std::string_view text);  // throws ConfigError

struct NetworkConfig {
  Semantics semantics = Semantics::Mention;
  long long delta = 3;  // minimum edge weight, inclusive
  bool include_singletons = false;
  // Drop engagements whose target never authored a tweet in the corpus and
  // has no user record.
  bool endpoints_in_corpus = true;
};

struct WeightedEdge {
  std::string src;
  std::string dst;
  long long weight = 1;
};

// Directed weighted engagement graph. Node ids are kept sorted, so node
// index order equals id order.
class EngagementGraph {
 public:
  using NodeId = kernels::NodeId;

  EngagementGraph() = default;
  // Endpoints missing from `nodes` are added. Self-loops are dropped and
  // parallel edges merged by summing weights. Throws DataError if a merged
  // weight is below `min_weight`.
  EngagementGraph(Semantics semantics, std::vector<std::string> nodes,
                  std::span<const WeightedEdge> edges, long long min_weight = 1);

  Semantics semantics() const { return semantics_; }
  long long min_weight() const { return min_weight_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return out_.arc_count(); }
  bool empty() const { return nodes_.empty(); }

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& node(NodeId v) const { return nodes_[v]; }
  std::optional<NodeId> index_of(std::string_view id) const;
  bool contains(std::string_view id) const { return index_of(id).has_value(); }

  const kernels::Csr& out_adjacency() const { return out_; }
  const kernels::Csr& in_adjacency() const { return in_; }
  std::span<const long long> out_weights(NodeId v) const {
    return {out_weight_.data() + out_.offsets[v], out_.offsets[v + 1] - out_.offsets[v]};
  }
  std::span<const long long> in_weights(NodeId v) const {
    return {in_weight_.data() + in_.offsets[v], in_.offsets[v + 1] - in_.offsets[v]};
  }
  std::size_t out_degree(NodeId v) const { return out_.offsets[v + 1] - out_.offsets[v]; }
  std::size_t in_degree(NodeId v) const { return in_.offsets[v + 1] - in_.offsets[v]; }
  bool is_singleton(NodeId v) const { return out_degree(v) == 0 && in_degree(v) == 0; }

  std::optional<long long> weight(std::string_view src, std::string_view dst) const;
  // All edges as (src, dst, weight), ordered by (src, dst).
  std::vector<WeightedEdge> edges() const;

  // Symmetric simple adjacency (edge if either direction exists).
  kernels::Csr undirected() const;

 private:
  Semantics semantics_ = Semantics::Mention;
  long long min_weight_ = 1;
  std::vector<std::string> nodes_;
  kernels::Csr out_;
  kernels::Csr in_;
  std::vector<long long> out_weight_;
  std::vector<long long> in_weight_;
};

// Raw engagement counts (src, dst) -> number of engaging tweets, self
// engagements excluded.
std::map<std::pair<std::string, std::string>, long long> engagement_counts(const Corpus& corpus,
                                                                           Semantics semantics);

EngagementGraph build_network(const Corpus& corpus, const NetworkConfig& cfg);

struct NetworkStats {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  double density = 0.0;
  std::size_t diameter = 0;
  std::uint64_t n_triangles = 0;
  std::uint64_t max_triangles_node = 0;
  std::size_t n_strong_cc = 0;
  std::size_t n_weak_cc = 0;
  std::size_t n_singletons = 0;
};

// |E| / (n (n - 1)); zero when n < 2.
double density(std::size_t n_nodes, std::size_t n_edges);

// Statistics over the non-singleton part of `g`. Throws DataError when `g`
// has no edges.
NetworkStats network_stats(const EngagementGraph& g);

enum class ComponentMode { Strong, Weak };

// Components as sorted id sets, ordered by smallest member id. Includes
// singleton nodes as their own components.
std::vector<std::vector<std::string>> connected_components(const EngagementGraph& g, ComponentMode mode);

// Induced subgraph on the largest weak component; ties go to the component
// holding the smallest node id.
EngagementGraph largest_connected_component(const EngagementGraph& g);

// Keeps nodes in `users` that belong to `g` and the edges among them.
EngagementGraph induced_subgraph(const EngagementGraph& g, const std::set<std::string>& users);

// Copy of `g` without singleton nodes.
EngagementGraph without_singletons(const EngagementGraph& g);

}  // namespace echonet
