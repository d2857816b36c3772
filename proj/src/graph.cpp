#include "echonet/graph.hpp"

#include <algorithm>
#include <numeric>

#include "echonet/error.hpp"

namespace echonet {
namespace {

using kernels::NodeId;

struct Arc {
  NodeId src;
  NodeId dst;
  long long weight;
};

void fill_csr(std::size_t n, std::vector<Arc> arcs, bool by_source, kernels::Csr& csr,
              std::vector<long long>& weights) {
  auto key = [by_source](const Arc& a) {
    return by_source ? std::pair(a.src, a.dst) : std::pair(a.dst, a.src);
  };
  std::sort(arcs.begin(), arcs.end(), [&](const Arc& a, const Arc& b) { return key(a) < key(b); });
  csr.offsets.assign(n + 1, 0);
  csr.targets.clear();
  weights.clear();
  for (const Arc& a : arcs) {
    const auto [row, col] = key(a);
    ++csr.offsets[row + 1];
    csr.targets.push_back(col);
    weights.push_back(a.weight);
  }
  for (std::size_t v = 0; v < n; ++v) csr.offsets[v + 1] += csr.offsets[v];
}

// Union-find over node indices.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller index stays root, so a root is its component's minimum.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<std::vector<NodeId>> weak_components(const EngagementGraph& g) {
  const std::size_t n = g.node_count();
  DisjointSets sets(n);
  const auto& out = g.out_adjacency();
  for (NodeId v = 0; v < n; ++v)
    for (NodeId w : out.neighbors(v)) sets.unite(v, w);
  std::map<std::size_t, std::vector<NodeId>> groups;
  for (NodeId v = 0; v < n; ++v) groups[sets.find(v)].push_back(v);
  std::vector<std::vector<NodeId>> result;
  for (auto& [root, members] : groups) result.push_back(std::move(members));
  return result;
}

// Iterative Tarjan.
std::vector<std::vector<NodeId>> strong_components(const EngagementGraph& g) {
  const std::size_t n = g.node_count();
  const auto& out = g.out_adjacency();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kNone), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> stack;
  std::vector<std::pair<NodeId, std::size_t>> call;  // node, next neighbor position
  std::vector<std::vector<NodeId>> result;
  std::size_t counter = 0;
  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    call.push_back({root, out.offsets[root]});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < out.offsets[v + 1]) {
        const NodeId w = out.targets[pos++];
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, out.offsets[w]});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const NodeId done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<NodeId> comp;
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        result.push_back(std::move(comp));
      }
    }
  }
  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return result;
}

std::vector<std::vector<std::string>> to_ids(const EngagementGraph& g,
                                             const std::vector<std::vector<NodeId>>& comps) {
  std::vector<std::vector<std::string>> out;
  out.reserve(comps.size());
  for (const auto& c : comps) {
    std::vector<std::string> ids;
    ids.reserve(c.size());
    for (NodeId v : c) ids.push_back(g.node(v));
    out.push_back(std::move(ids));
  }
  return out;
}

}  // namespace

std::string_view to_string(Semantics s) {
  switch (s) {
    case Semantics::Mention: return "mention";
    case Semantics::Reply: return "reply";
    case Semantics::Retweet: return "retweet";
  }
  return "?";
}

Semantics parse_semantics(std::string_view text) {
  if (text == "mention") return Semantics::Mention;
  if (text == "reply") return Semantics::Reply;
  if (text == "retweet") return Semantics::Retweet;
  throw ConfigError("unknown network semantics '" + std::string(text) + "'");
}

EngagementGraph::EngagementGraph(Semantics semantics, std::vector<std::string> nodes,
                                 std::span<const WeightedEdge> edges, long long min_weight)
    : semantics_(semantics), min_weight_(min_weight) {
  if (min_weight < 1) throw ConfigError("edge weight threshold must be >= 1");
  for (const auto& e : edges) {
    nodes.push_back(e.src);
    nodes.push_back(e.dst);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  nodes_ = std::move(nodes);

  std::map<std::pair<NodeId, NodeId>, long long> merged;
  for (const auto& e : edges) {
    if (e.src == e.dst) continue;
    if (e.weight <= 0) throw DataError("edge weights must be positive");
    merged[{*index_of(e.src), *index_of(e.dst)}] += e.weight;
  }
  std::vector<Arc> arcs;
  arcs.reserve(merged.size());
  for (const auto& [key, w] : merged) {
    if (w < min_weight_)
      throw DataError("edge " + nodes_[key.first] + "->" + nodes_[key.second] + " has weight " +
                      std::to_string(w) + " below threshold " + std::to_string(min_weight_));
    arcs.push_back({key.first, key.second, w});
  }
  fill_csr(nodes_.size(), arcs, true, out_, out_weight_);
  fill_csr(nodes_.size(), std::move(arcs), false, in_, in_weight_);
}

std::optional<EngagementGraph::NodeId> EngagementGraph::index_of(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<NodeId>(it - nodes_.begin());
}

std::optional<long long> EngagementGraph::weight(std::string_view src, std::string_view dst) const {
  const auto s = index_of(src);
  const auto d = index_of(dst);
  if (!s || !d) return std::nullopt;
  const auto row = out_.neighbors(*s);
  auto it = std::lower_bound(row.begin(), row.end(), *d);
  if (it == row.end() || *it != *d) return std::nullopt;
  return out_weight_[out_.offsets[*s] + (it - row.begin())];
}

std::vector<WeightedEdge> EngagementGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(edge_count());
  for (NodeId v = 0; v < node_count(); ++v) {
    const auto row = out_.neighbors(v);
    const auto w = out_weights(v);
    for (std::size_t i = 0; i < row.size(); ++i) out.push_back({nodes_[v], nodes_[row[i]], w[i]});
  }
  return out;
}

kernels::Csr EngagementGraph::undirected() const {
  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(2 * edge_count());
  for (NodeId v = 0; v < node_count(); ++v) {
    for (NodeId w : out_.neighbors(v)) {
      arcs.emplace_back(v, w);
      arcs.emplace_back(w, v);
    }
  }
  return kernels::make_csr(node_count(), arcs);
}

std::map<std::pair<std::string, std::string>, long long> engagement_counts(const Corpus& corpus,
                                                                           Semantics semantics) {
  std::map<std::pair<std::string, std::string>, long long> counts;
  for (const Tweet& t : corpus.tweets()) {
    auto add = [&](const std::string& target) {
      if (target != t.author_id) ++counts[{t.author_id, target}];
    };
    switch (semantics) {
      case Semantics::Mention:
        for (const auto& m : t.mentions) add(m);
        break;
      case Semantics::Reply:
        if (t.in_reply_to_user) add(*t.in_reply_to_user);
        break;
      case Semantics::Retweet:
        if (t.retweet_of_user) add(*t.retweet_of_user);
        break;
    }
  }
  return counts;
}

EngagementGraph build_network(const Corpus& corpus, const NetworkConfig& cfg) {
  if (cfg.delta < 1) throw ConfigError("delta must be >= 1");
  const auto known = corpus.all_users();
  std::vector<WeightedEdge> edges;
  for (const auto& [key, count] : engagement_counts(corpus, cfg.semantics)) {
    if (count < cfg.delta) continue;
    if (cfg.endpoints_in_corpus && !std::binary_search(known.begin(), known.end(), key.second)) continue;
    edges.push_back({key.first, key.second, count});
  }
  std::vector<std::string> nodes;
  if (cfg.include_singletons) nodes = known;
  return EngagementGraph(cfg.semantics, std::move(nodes), edges, cfg.delta);
}

double density(std::size_t n_nodes, std::size_t n_edges) {
  if (n_nodes < 2) return 0.0;
  return static_cast<double>(n_edges) /
         (static_cast<double>(n_nodes) * static_cast<double>(n_nodes - 1));
}

EngagementGraph without_singletons(const EngagementGraph& g) {
  const auto edges = g.edges();
  return EngagementGraph(g.semantics(), {}, edges, g.min_weight());
}

NetworkStats network_stats(const EngagementGraph& full) {
  if (full.edge_count() == 0) throw DataError("network statistics need at least one edge");
  NetworkStats s;
  s.n_singletons = 0;
  for (kernels::NodeId v = 0; v < full.node_count(); ++v) s.n_singletons += full.is_singleton(v);
  const EngagementGraph g = without_singletons(full);
  s.n_nodes = g.node_count();
  s.n_edges = g.edge_count();
  s.density = density(s.n_nodes, s.n_edges);
  const kernels::Csr und = g.undirected();
  s.diameter = kernels::max_eccentricity_parallel(und);
  const auto tri = kernels::triangles_per_node_parallel(und);
  std::uint64_t sum = 0;
  for (auto t : tri) {
    sum += t;
    s.max_triangles_node = std::max(s.max_triangles_node, t);
  }
  s.n_triangles = sum / 3;
  s.n_strong_cc = strong_components(g).size();
  s.n_weak_cc = weak_components(g).size();
  return s;
}

std::vector<std::vector<std::string>> connected_components(const EngagementGraph& g, ComponentMode mode) {
  return to_ids(g, mode == ComponentMode::Strong ? strong_components(g) : weak_components(g));
}

EngagementGraph largest_connected_component(const EngagementGraph& g) {
  const auto comps = weak_components(g);
  if (comps.empty()) return EngagementGraph(g.semantics(), {}, {}, g.min_weight());
  // Components are ordered by smallest member, so the first maximum wins ties.
  const auto best = std::max_element(comps.begin(), comps.end(),
                                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::set<std::string> members;
  for (auto v : *best) members.insert(g.node(v));
  return induced_subgraph(g, members);
}

EngagementGraph induced_subgraph(const EngagementGraph& g, const std::set<std::string>& users) {
  std::vector<std::string> nodes;
  for (const auto& u : users)
    if (g.contains(u)) nodes.push_back(u);
  std::vector<WeightedEdge> edges;
  for (auto& e : g.edges())
    if (users.count(e.src) && users.count(e.dst)) edges.push_back(std::move(e));
  return EngagementGraph(g.semantics(), std::move(nodes), edges, g.min_weight());
}

}  // namespace echonet
