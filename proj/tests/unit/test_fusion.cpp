#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "echonet/centrality.hpp"
#include "echonet/error.hpp"
#include "echonet/fusion.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace echonet {
namespace {

using testing::tweet;
using Names = std::vector<std::string>;

EngagementGraph graph(std::vector<WeightedEdge> e, Names nodes = {}) {
  return EngagementGraph(Semantics::Mention, std::move(nodes), e);
}

StreamConfig blocks(std::string_view name, std::size_t t_max, std::size_t f_max) {
  StreamConfig c = parse_stream_config(name);
  c.T_max = t_max;
  c.F_max = f_max;
  return c;
}

TEST(StreamConfig, LengthAndNames) {
  EXPECT_EQ(blocks("U+UF+N", 4, 2).feature_length(), 14u);
  EXPECT_EQ(blocks("U", 256, 64).feature_length(), 256u);
  EXPECT_EQ(blocks("U+UF+FU+N", 256, 64).feature_length(), 256u + 64 + 64 + 8);
  EXPECT_EQ(parse_stream_config("N+UF+U").name(), "U+UF+N");
  EXPECT_THROW(parse_stream_config("U+XX"), ConfigError);
  StreamConfig none;
  none.include_U = false;
  EXPECT_THROW(validate(none), ConfigError);
  EXPECT_THROW(validate(blocks("U", 0, 1)), ConfigError);
}

TEST(StreamConfig, AblationRows) {
  Names names;
  for (const auto& c : ablation_configs()) names.push_back(c.name());
  EXPECT_EQ(names, (Names{"U", "U+FU", "U+UF+FU+N", "U+N", "U+UF", "U+UF+N"}));
}

TEST(NeighborStreams, Directions) {
  const auto g = graph({{"v", "u", 3}, {"u", "w", 4}, {"x", "u", 5}, {"w", "x", 3}}, {"iso"});
  const auto s = neighbor_streams(g, "u");
  EXPECT_EQ(s.followers, (Names{"v", "x"}));
  EXPECT_EQ(s.followees, (Names{"w"}));
  EXPECT_TRUE(neighbor_streams(g, "iso").followers.empty());
  EXPECT_TRUE(neighbor_streams(g, "absent").followees.empty());
}

TEST(NetworkFeatures, StarHub) {
  std::vector<WeightedEdge> e;
  for (int i = 0; i < 5; ++i) e.push_back({"hub", "leaf" + std::to_string(i), 3});
  const auto g = graph(e, {"iso"});
  const auto f = network_features(g, "hub");
  EXPECT_EQ(f[0], 0.0);
  EXPECT_EQ(f[1], 5.0);
  EXPECT_EQ(f[2], 0.0);
  EXPECT_EQ(f[3], 15.0);
  EXPECT_EQ(network_features(g, "iso"), NetworkFeatureVector{});
  bool present = true;
  EXPECT_EQ(NetworkFeatureTable(g).raw("nobody", &present), NetworkFeatureVector{});
  EXPECT_FALSE(present);
}

TEST(NetworkFeatures, MatchOracles) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = oracle::random_graph(10, 0.25, rng);
    const auto adj = oracle::adjacency(g);
    const auto btw = oracle::betweenness(adj);
    const auto clo = oracle::harmonic_closeness(adj);
    const auto tri = oracle::triangles_per_node(adj);
    oracle::Weights unit(adj.size(), std::vector<double>(adj.size()));
    for (std::size_t i = 0; i < adj.size(); ++i)
      for (std::size_t j = 0; j < adj.size(); ++j) unit[i][j] = adj[i][j];
    const auto pr = oracle::pagerank(unit, 0.85);
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      const auto f = network_features(g, g.node(v));
      EXPECT_EQ(f[0], static_cast<double>(g.in_degree(v)));
      EXPECT_EQ(f[1], static_cast<double>(g.out_degree(v)));
      EXPECT_NEAR(f[4], btw[v], 1e-9);
      EXPECT_NEAR(f[5], clo[v], 1e-9);
      EXPECT_NEAR(f[6], g.is_singleton(v) ? 0.0 : pr[v], 1e-8);
      EXPECT_EQ(f[7], static_cast<double>(tri[v]));
    }
  }
}

TEST(FeatureScaler, TrainingStatistics) {
  std::vector<NetworkFeatureVector> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].fill(7.0);
    rows[i][0] = i;  // 0, 1, 2
  }
  FeatureScaler s;
  s.fit(rows);
  EXPECT_DOUBLE_EQ(s.mean()[0], 1.0);
  EXPECT_DOUBLE_EQ(s.stddev()[0], std::sqrt(2.0 / 3.0));
  NetworkFeatureVector probe{};
  probe.fill(9.0);
  probe[0] = 4.0;
  const auto z = s.apply(probe);
  EXPECT_DOUBLE_EQ(z[0], 3.0 / std::sqrt(2.0 / 3.0));
  EXPECT_DOUBLE_EQ(z[1], 0.0);  // constant feature
}

// Scores every text by a lookup table; unknown texts score 0.
class TableScorer final : public PostScorer {
 public:
  explicit TableScorer(std::map<std::string, double> m) : m_(std::move(m)) {}
  std::string_view transport() const override { return "in_process_reference"; }
  void train(std::span<const LabeledPost>) override {}
  std::vector<double> score(std::span<const std::string> texts) override {
    std::vector<double> out;
    for (const auto& t : texts) out.push_back(m_.count(t) ? m_.at(t) : 0.0);
    return out;
  }

 private:
  std::map<std::string, double> m_;
};

Corpus fusion_corpus() {
  return Corpus({tweet("1", "u", "low"), tweet("2", "u", "high"), tweet("3", "f", "a"), tweet("4", "f", "b"),
                 tweet("5", "g", "c"), tweet("6", "v", "d")});
}

TableScorer fusion_scorer() { return TableScorer({{"low", 0.1}, {"high", 0.9}, {"a", 0.2}, {"b", 0.4}, {"c", 0.8}, {"d", 0.6}}); }

TEST(Assemble, OwnBlockSortedAndPadded) {
  auto scorer = fusion_scorer();
  const auto g = graph({{"u", "f", 3}});
  const auto f = assemble_features("u", fusion_corpus(), g, scorer, blocks("U", 4, 2));
  EXPECT_EQ(f.values, (std::vector<double>{0.9, 0.1, 0.0, 0.0}));
  EXPECT_EQ(f.mask, (std::vector<unsigned char>{1, 1, 0, 0}));
  EXPECT_FALSE(f.has_network_block);
}

TEST(Assemble, NeighborMeansAndNetworkBlock) {
  auto scorer = fusion_scorer();
  const auto g = graph({{"u", "f", 3}, {"u", "g", 3}, {"v", "u", 4}, {"u", "silent", 3}});
  const auto cfg = blocks("U+UF+FU+N", 4, 2);
  const auto f = assemble_features("u", fusion_corpus(), g, scorer, cfg);
  ASSERT_EQ(f.values.size(), cfg.feature_length());
  // Followees g (0.8) and f (mean 0.3); "silent" has no tweets. Follower v (0.6).
  EXPECT_NEAR(f.values[4], 0.8, 1e-12);
  EXPECT_NEAR(f.values[5], 0.3, 1e-12);
  EXPECT_NEAR(f.values[6], 0.6, 1e-12);
  EXPECT_EQ(f.values[7], 0.0);
  EXPECT_EQ(f.mask[7], 0);
  EXPECT_TRUE(f.has_network_block);
  EXPECT_EQ(f.network_offset, 8u);
  EXPECT_EQ(f.values[8], 1.0);   // in-degree
  EXPECT_EQ(f.values[9], 3.0);   // out-degree
  EXPECT_EQ(f.values[11], 9.0);  // weighted out-degree
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_GE(f.values[i], 0.0);
    EXPECT_LE(f.values[i], 1.0);
  }
}

TEST(Assemble, LengthIsPureFunctionOfConfig) {
  auto scorer = fusion_scorer();
  const auto corpus = fusion_corpus();
  const auto g = graph({{"u", "f", 3}, {"v", "u", 4}}, {"lonely"});
  for (const auto& cfg : ablation_configs(blocks("U", 3, 2))) {
    for (const char* user : {"u", "f", "v", "lonely", "ghost"}) {
      const auto f = assemble_features(user, corpus, g, scorer, cfg);
      EXPECT_EQ(f.values.size(), cfg.feature_length());
      EXPECT_EQ(f.mask.size(), cfg.feature_length());
    }
  }
}

TEST(Assemble, OwnOnlyIgnoresNeighbors) {
  auto scorer = fusion_scorer();
  const auto corpus = fusion_corpus();
  const auto cfg = blocks("U", 4, 2);
  const auto a = assemble_features("u", corpus, graph({{"u", "f", 3}}), scorer, cfg);
  const auto b = assemble_features("u", corpus, graph({{"g", "u", 9}, {"u", "v", 3}}), scorer, cfg);
  EXPECT_EQ(a.values, b.values);
}

TEST(Assemble, PermutedTweetsSameFeatures) {
  auto scorer = fusion_scorer();
  const auto g = graph({{"u", "f", 3}});
  Corpus reversed({tweet("2", "u", "high"), tweet("1", "u", "low"), tweet("4", "f", "b"), tweet("3", "f", "a")});
  const auto cfg = blocks("U+UF", 3, 2);
  EXPECT_EQ(assemble_features("u", fusion_corpus(), g, scorer, cfg).values,
            assemble_features("u", reversed, g, scorer, cfg).values);
}

TEST(Assemble, NormalizeNetworkBlock) {
  auto scorer = fusion_scorer();
  const auto g = graph({{"u", "f", 3}, {"v", "u", 4}});
  auto f = assemble_features("u", fusion_corpus(), g, scorer, blocks("U+N", 2, 1));
  std::vector<NetworkFeatureVector> train = {NetworkFeatureTable(g).raw("u"), NetworkFeatureTable(g).raw("f")};
  FeatureScaler s;
  s.fit(train);
  normalize_network_block(f, s);
  const auto z = s.apply(train[0]);
  for (std::size_t j = 0; j < kNetworkFeatureCount; ++j) EXPECT_DOUBLE_EQ(f.values[2 + j], z[j]);
  EXPECT_EQ(f.values[0], 0.9);
}

}  // namespace
}  // namespace echonet
