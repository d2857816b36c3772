#include "echonet/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "echonet/centrality.hpp"
#include "echonet/error.hpp"

namespace echonet {

std::size_t StreamConfig::feature_length() const {
  return (include_U ? T_max : 0) + (include_UF ? F_max : 0) + (include_FU ? F_max : 0) +
         (include_N ? kNetworkFeatureCount : 0);
}

std::string StreamConfig::name() const {
  std::string out;
  auto add = [&out](bool on, const char* part) {
    if (!on) return;
    if (!out.empty()) out += '+';
    out += part;
  };
  add(include_U, "U");
  add(include_UF, "UF");
  add(include_FU, "FU");
  add(include_N, "N");
  return out;
}

void validate(const StreamConfig& cfg) {
  if (!cfg.include_U && !cfg.include_UF && !cfg.include_FU && !cfg.include_N)
    throw ConfigError("stream config selects no blocks");
  if (cfg.T_max < 1 || cfg.F_max < 1) throw ConfigError("T_max and F_max must be >= 1");
  if (cfg.delta < 1) throw ConfigError("delta must be >= 1");
}

StreamConfig parse_stream_config(std::string_view name, const StreamConfig& base) {
  StreamConfig cfg = base;
  cfg.include_U = cfg.include_UF = cfg.include_FU = cfg.include_N = false;
  std::stringstream ss{std::string(name)};
  std::string part;
  while (std::getline(ss, part, '+')) {
    if (part == "U") cfg.include_U = true;
    else if (part == "UF") cfg.include_UF = true;
    else if (part == "FU") cfg.include_FU = true;
    else if (part == "N") cfg.include_N = true;
    else throw ConfigError("unknown stream block '" + part + "' in '" + std::string(name) + "'");
  }
  validate(cfg);
  return cfg;
}

std::vector<StreamConfig> ablation_configs(const StreamConfig& base) {
  std::vector<StreamConfig> out;
  for (const char* name : {"U", "U+FU", "U+UF+FU+N", "U+N", "U+UF", "U+UF+N"})
    out.push_back(parse_stream_config(name, base));
  return out;
}

NetworkFeatureTable::NetworkFeatureTable(const EngagementGraph& g) : users_(g.nodes()), rows_(g.node_count()) {
  const auto betweenness = kernels::betweenness_parallel(g.out_adjacency());
  const auto closeness = kernels::harmonic_closeness_parallel(g.out_adjacency());
  const auto pagerank = centrality(g, CentralityMeasure::PageRank).scores;
  const auto triangles = kernels::triangles_per_node_parallel(g.undirected());
  for (kernels::NodeId v = 0; v < g.node_count(); ++v) {
    // Isolated users carry no network signal; their teleport-only PageRank is dropped too.
    if (g.is_singleton(v)) continue;
    double win = 0.0, wout = 0.0;
    for (auto w : g.in_weights(v)) win += static_cast<double>(w);
    for (auto w : g.out_weights(v)) wout += static_cast<double>(w);
    rows_[v] = {static_cast<double>(g.in_degree(v)), static_cast<double>(g.out_degree(v)), win, wout,
                betweenness[v], closeness[v], pagerank[v], static_cast<double>(triangles[v])};
  }
}

NetworkFeatureVector NetworkFeatureTable::raw(std::string_view user, bool* present) const {
  auto it = std::lower_bound(users_.begin(), users_.end(), user);
  const bool found = it != users_.end() && *it == user;
  if (present) *present = found;
  if (!found) return {};
  return rows_[it - users_.begin()];
}

void FeatureScaler::fit(std::span<const NetworkFeatureVector> rows) {
  mean_.fill(0.0);
  std_.fill(0.0);
  if (rows.empty()) return;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows)
    for (std::size_t j = 0; j < kNetworkFeatureCount; ++j) mean_[j] += r[j] / n;
  for (const auto& r : rows)
    for (std::size_t j = 0; j < kNetworkFeatureCount; ++j) std_[j] += (r[j] - mean_[j]) * (r[j] - mean_[j]) / n;
  for (auto& s : std_) s = std::sqrt(s);
}

NetworkFeatureVector FeatureScaler::apply(const NetworkFeatureVector& raw) const {
  NetworkFeatureVector out{};
  for (std::size_t j = 0; j < kNetworkFeatureCount; ++j)
    out[j] = std_[j] > 0.0 ? (raw[j] - mean_[j]) / std_[j] : 0.0;
  return out;
}

NeighborStreams neighbor_streams(const EngagementGraph& g, std::string_view user) {
  NeighborStreams s;
  const auto v = g.index_of(user);
  if (!v) return s;
  for (auto w : g.out_adjacency().neighbors(*v)) s.followees.push_back(g.node(w));
  for (auto w : g.in_adjacency().neighbors(*v)) s.followers.push_back(g.node(w));
  return s;
}

NetworkFeatureVector network_features(const EngagementGraph& g, std::string_view user) {
  return NetworkFeatureTable(g).raw(user);
}

NetworkFeatureVector network_features(const NetworkFeatureTable& table, const FeatureScaler& scaler,
                                      std::string_view user) {
  bool present = false;
  const auto raw = table.raw(user, &present);
  return present ? scaler.apply(raw) : NetworkFeatureVector{};
}

ScoreTable score_corpus(PostScorer& scorer, const Corpus& corpus) {
  const auto scores = score_posts(scorer, corpus.tweets());
  ScoreTable table;
  table.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) table[corpus.tweets()[i].tweet_id] = scores[i];
  return table;
}

namespace {

double lookup(const ScoreTable& scores, const std::string& tweet_id) {
  auto it = scores.find(tweet_id);
  if (it == scores.end()) throw DataError("no post score for tweet '" + tweet_id + "'");
  return it->second;
}

void append_block(std::vector<double> block, std::size_t width, FusionFeatures& f) {
  std::sort(block.begin(), block.end(), std::greater<>());
  for (std::size_t i = 0; i < width; ++i) {
    const bool real = i < block.size();
    f.values.push_back(real ? block[i] : 0.0);
    f.mask.push_back(real ? 1 : 0);
  }
}

std::vector<double> neighbor_means(const std::vector<std::string>& neighbors, const Corpus& corpus,
                                   const ScoreTable& scores) {
  std::vector<double> means;
  for (const auto& v : neighbors) {
    const auto timeline = corpus.timeline(v);
    if (timeline.empty()) continue;
    double sum = 0.0;
    for (const Tweet* t : timeline) sum += lookup(scores, t->tweet_id);
    means.push_back(sum / static_cast<double>(timeline.size()));
  }
  return means;
}

}  // namespace

FusionFeatures assemble_features(std::string_view user, const Corpus& corpus, const EngagementGraph& g,
                                 const ScoreTable& scores, const NetworkFeatureTable& network,
                                 const StreamConfig& cfg) {
  validate(cfg);
  FusionFeatures f;
  f.user_id = std::string(user);
  f.values.reserve(cfg.feature_length());
  if (cfg.include_U) {
    std::vector<double> own;
    for (const Tweet* t : corpus.timeline(user)) own.push_back(lookup(scores, t->tweet_id));
    append_block(std::move(own), cfg.T_max, f);
  }
  const bool need_streams = cfg.include_UF || cfg.include_FU;
  const NeighborStreams streams = need_streams ? neighbor_streams(g, user) : NeighborStreams{};
  if (cfg.include_UF) append_block(neighbor_means(streams.followees, corpus, scores), cfg.F_max, f);
  if (cfg.include_FU) append_block(neighbor_means(streams.followers, corpus, scores), cfg.F_max, f);
  if (cfg.include_N) {
    f.has_network_block = true;
    f.network_offset = f.values.size();
    bool present = false;
    const auto raw = network.raw(user, &present);
    for (double v : raw) {
      f.values.push_back(v);
      f.mask.push_back(present ? 1 : 0);
    }
  }
  return f;
}

FusionFeatures assemble_features(std::string_view user, const Corpus& corpus, const EngagementGraph& g,
                                 PostScorer& scorer, const StreamConfig& cfg) {
  validate(cfg);
  std::vector<std::string> users{std::string(user)};
  if (cfg.include_UF || cfg.include_FU) {
    const auto streams = neighbor_streams(g, user);
    if (cfg.include_UF) users.insert(users.end(), streams.followees.begin(), streams.followees.end());
    if (cfg.include_FU) users.insert(users.end(), streams.followers.begin(), streams.followers.end());
  }
  std::vector<std::string> ids, texts;
  for (const auto& u : users) {
    for (const Tweet* t : corpus.timeline(u)) {
      ids.push_back(t->tweet_id);
      texts.push_back(t->text);
    }
  }
  const auto s = scorer.score(texts);
  ScoreTable table;
  for (std::size_t i = 0; i < ids.size(); ++i) table[ids[i]] = s[i];
  const NetworkFeatureTable network = cfg.include_N ? NetworkFeatureTable(g) : NetworkFeatureTable();
  return assemble_features(user, corpus, g, table, network, cfg);
}

void normalize_network_block(FusionFeatures& f, const FeatureScaler& scaler) {
  if (!f.has_network_block) return;
  NetworkFeatureVector raw{};
  bool present = false;
  for (std::size_t j = 0; j < kNetworkFeatureCount; ++j) {
    raw[j] = f.values[f.network_offset + j];
    present = present || f.mask[f.network_offset + j];
  }
  const auto z = present ? scaler.apply(raw) : NetworkFeatureVector{};
  for (std::size_t j = 0; j < kNetworkFeatureCount; ++j) f.values[f.network_offset + j] = z[j];
}

}  // namespace echonet
