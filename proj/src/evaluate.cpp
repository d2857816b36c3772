#include <algorithm>
#include <random>
#include <set>

#include "echonet/error.hpp"
#include "echonet/fusion.hpp"

namespace echonet {

std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  std::vector<int> assignment(labels.size(), 0);
  std::mt19937_64 rng(seed);
  for (int cls : {1, 0}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if ((labels[i] == 1) == (cls == 1)) members.push_back(i);
    // Fisher-Yates with our own index draw, so the order does not depend on
    // the standard library's distribution implementation.
    for (std::size_t i = members.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>((rng() >> 11) * 0x1.0p-53 * static_cast<double>(i));
      std::swap(members[i - 1], members[j]);
    }
    for (std::size_t r = 0; r < members.size(); ++r) assignment[members[r]] = static_cast<int>(r % folds);
  }
  return assignment;
}

std::vector<EvalReport> evaluate(const Corpus& corpus, const std::map<std::string, Label>& gold,
                                 std::span<const StreamConfig> configs, const EvaluateOptions& opts) {
  if (configs.empty()) throw ConfigError("evaluate needs at least one stream config");
  for (const auto& c : configs) validate(c);

  std::vector<std::string> users;
  std::vector<int> y;
  for (const auto& [user, label] : gold) {
    if (corpus.timeline(user).empty()) throw DataError("gold user '" + user + "' has no tweets in the corpus");
    users.push_back(user);
    y.push_back(label == Label::HM ? 1 : 0);
  }
  const auto fold_of = stratified_folds(y, opts.folds, opts.seed);

  // One graph per distinct delta.
  std::map<long long, EngagementGraph> graphs;
  std::map<long long, NetworkFeatureTable> tables;
  for (const auto& c : configs) {
    if (graphs.count(c.delta)) continue;
    NetworkConfig nc;
    nc.semantics = opts.stream_semantics;
    nc.delta = c.delta;
    auto g = build_network(corpus, nc);
    tables.emplace(c.delta, NetworkFeatureTable(g));
    graphs.emplace(c.delta, std::move(g));
  }

  std::vector<EvalReport> reports(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) reports[c].config = configs[c].name();

  for (int fold = 0; fold < opts.folds; ++fold) {
    std::set<int> train_classes, test_classes;
    for (std::size_t i = 0; i < users.size(); ++i) (fold_of[i] == fold ? test_classes : train_classes).insert(y[i]);
    if (train_classes.size() < 2 || test_classes.size() < 2)
      throw EvaluationError("fold " + std::to_string(fold) + " holds a single class");
  }

  for (int fold = 0; fold < opts.folds; ++fold) {
    std::vector<std::string> train_users, test_users;
    for (std::size_t i = 0; i < users.size(); ++i) (fold_of[i] == fold ? test_users : train_users).push_back(users[i]);

    std::unique_ptr<PostScorer> scorer =
        opts.scorer_factory ? opts.scorer_factory() : std::make_unique<ReferenceScorer>();
    const auto posts = inherit_post_labels(corpus, train_users);
    scorer->train(posts);

    std::set<std::string> test_tweets;
    for (const auto& u : test_users)
      for (const Tweet* t : corpus.timeline(u)) test_tweets.insert(t->tweet_id);
    std::size_t leaked = 0;
    for (const auto& p : posts) leaked += test_tweets.count(p.id);

    const ScoreTable scores = score_corpus(*scorer, corpus);

    for (std::size_t c = 0; c < configs.size(); ++c) {
      const auto& cfg = configs[c];
      const auto& g = graphs.at(cfg.delta);
      const auto& table = tables.at(cfg.delta);
      std::vector<FusionFeatures> features;
      features.reserve(users.size());
      for (const auto& u : users) features.push_back(assemble_features(u, corpus, g, scores, table, cfg));

      FeatureScaler scaler;
      if (cfg.include_N) {
        std::vector<NetworkFeatureVector> train_raw;
        for (std::size_t i = 0; i < users.size(); ++i) {
          if (fold_of[i] == fold) continue;
          bool present = false;
          const auto raw = table.raw(users[i], &present);
          if (present) train_raw.push_back(raw);
        }
        scaler.fit(train_raw);
        for (auto& f : features) normalize_network_block(f, scaler);
      }

      std::vector<std::vector<double>> train_x, test_x;
      std::vector<int> train_y, test_y;
      for (std::size_t i = 0; i < users.size(); ++i) {
        if (fold_of[i] == fold) {
          test_x.push_back(features[i].values);
          test_y.push_back(y[i]);
        } else {
          train_x.push_back(features[i].values);
          train_y.push_back(y[i]);
        }
      }
      auto model = train_user_classifier(train_x, train_y, opts.classifier);
      const auto proba = model->predict_proba(test_x);

      FoldReport fr;
      fr.fold = fold;
      fr.metrics = binary_metrics(proba, test_y);
      fr.train_users = train_users.size();
      fr.test_users = test_users.size();
      fr.scorer_training_tweets = posts.size();
      fr.leaked_tweets = leaked;
      reports[c].folds.push_back(fr);
    }
  }

  for (auto& r : reports) {
    const double k = static_cast<double>(r.folds.size());
    for (const auto& f : r.folds) {
      r.precision += f.metrics.precision / k;
      r.recall += f.metrics.recall / k;
      r.auc += f.metrics.auc / k;
    }
    r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  }
  return reports;
}

}  // namespace echonet
