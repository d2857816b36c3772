#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "echonet/error.hpp"
#include "echonet/fusion.hpp"
#include "echonet/hashing.hpp"
#include "echonet/scorer.hpp"
#include "fixtures.hpp"

namespace echonet {
namespace {

using testing::tweet;

double relative_error(double a, double b) { return std::abs(a - b) / std::max(1e-8, std::abs(a) + std::abs(b)); }

const std::vector<std::string> kFiller = {"the", "news", "today", "people", "vote", "city", "game", "rain",
                                          "market", "school", "music", "coffee", "street", "team", "road"};

std::vector<LabeledPost> echo_posts(int n, std::uint64_t seed) {
  const std::vector<std::string> targets = {"bankers", "globalists", "media", "elites", "soros", "hollywood"};
  std::mt19937_64 rng(seed);
  std::vector<LabeledPost> posts;
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    std::string text;
    for (int w = 0; w < 5; ++w) text += kFiller[rng() % kFiller.size()] + " ";
    if (label == 1) text += "(((" + targets[rng() % targets.size()] + ")))";
    else text += kFiller[rng() % kFiller.size()];
    posts.push_back({"p" + std::to_string(i), text, label});
  }
  return posts;
}

TEST(Hashing, RowsNormalizedAndSorted) {
  const auto row = hashed_char_ngrams("(((Bankers))) own");
  ASSERT_FALSE(row.empty());
  double sq = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    sq += row[i].second * row[i].second;
    if (i > 0) EXPECT_LT(row[i - 1].first, row[i].first);
    EXPECT_LT(row[i].first, 1u << 18);
  }
  EXPECT_NEAR(sq, 1.0, 1e-12);
  EXPECT_TRUE(hashed_char_ngrams("").empty());
  EXPECT_EQ(hashed_char_ngrams("ABC def"), hashed_char_ngrams("abc DEF"));
}

TEST(ReferenceScorer, LearnsEchoPosts) {
  const auto train = echo_posts(200, 1);
  ReferenceScorer s;
  s.train(train);
  EXPECT_EQ(s.trained_ids().size(), 200u);
  const auto test = echo_posts(200, 2);
  std::vector<std::string> texts;
  for (const auto& p : test) texts.push_back(p.text);
  const auto scores = s.score(texts);
  int correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    EXPECT_GE(scores[i], 0.0);
    EXPECT_LE(scores[i], 1.0);
    correct += (scores[i] > 0.5) == (test[i].label == 1);
  }
  EXPECT_GE(correct / 200.0, 0.9);
  EXPECT_GT(s.score_one("rain again, the (((bankers)))"), 0.5);
}

TEST(ReferenceScorer, SeparableToySet) {
  std::vector<LabeledPost> posts;
  for (int i = 0; i < 10; ++i) posts.push_back({"a" + std::to_string(i), "alpha", 1});
  for (int i = 0; i < 10; ++i) posts.push_back({"b" + std::to_string(i), "omega", 0});
  ReferenceScorer s;
  s.train(posts);
  EXPECT_GT(s.score_one("alpha"), 0.5);
  EXPECT_LT(s.score_one("omega"), 0.5);
}

TEST(ReferenceScorer, EmptyTextIsBiasOnly) {
  ReferenceScorer untrained;
  EXPECT_DOUBLE_EQ(untrained.score_one(""), 0.5);
  ReferenceScorer s;
  s.train(echo_posts(40, 3));
  EXPECT_DOUBLE_EQ(s.score_one(""), 1.0 / (1.0 + std::exp(-s.bias())));
  EXPECT_TRUE(s.score({}).empty());
}

TEST(ReferenceScorer, SingleClassIsTrainingError) {
  std::vector<LabeledPost> posts = {{"a", "x", 1}, {"b", "y", 1}};
  ReferenceScorer s;
  EXPECT_THROW(s.train(posts), TrainingError);
}

TEST(ReferenceScorer, Deterministic) {
  const auto posts = echo_posts(60, 4);
  ReferenceScorer a, b;
  a.train(posts);
  b.train(posts);
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.bias(), b.bias());
}

TEST(ReferenceScorer, GradientMatchesFiniteDifferences) {
  NgramHashConfig hc;
  hc.buckets = 64;
  const auto posts = echo_posts(10, 5);
  std::vector<SparseRow> rows;
  std::vector<int> labels;
  for (const auto& p : posts) {
    rows.push_back(hashed_char_ngrams(p.text, hc));
    labels.push_back(p.label);
  }
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd(0.0, 0.5);
  std::vector<double> w(64);
  for (auto& x : w) x = nd(rng);
  const double b = 0.3, l2 = 0.01, h = 1e-6;
  std::vector<double> gw;
  double gb = 0.0;
  ReferenceScorer::loss_and_gradient(rows, labels, w, b, l2, &gw, &gb);
  ASSERT_EQ(gw.size(), w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    auto wp = w, wm = w;
    wp[j] += h;
    wm[j] -= h;
    const double fd = (ReferenceScorer::loss_and_gradient(rows, labels, wp, b, l2, nullptr, nullptr) -
                       ReferenceScorer::loss_and_gradient(rows, labels, wm, b, l2, nullptr, nullptr)) /
                      (2 * h);
    EXPECT_LT(relative_error(fd, gw[j]), 1e-5) << "coordinate " << j;
  }
  const double fdb = (ReferenceScorer::loss_and_gradient(rows, labels, w, b + h, l2, nullptr, nullptr) -
                      ReferenceScorer::loss_and_gradient(rows, labels, w, b - h, l2, nullptr, nullptr)) /
                     (2 * h);
  EXPECT_LT(relative_error(fdb, gb), 1e-5);
}

TEST(LogisticRegression, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<std::vector<double>> rows(10, std::vector<double>(6));
  std::vector<int> labels;
  for (auto& r : rows) {
    for (auto& x : r) x = nd(rng);
    labels.push_back(r[0] + 0.5 * nd(rng) > 0 ? 1 : 0);
  }
  std::vector<double> w(6);
  for (auto& x : w) x = nd(rng);
  const double b = -0.2, l2 = 0.05, h = 1e-6;
  std::vector<double> gw;
  double gb = 0.0;
  LogisticRegression::loss_and_gradient(rows, labels, w, b, l2, &gw, &gb);
  for (std::size_t j = 0; j < w.size(); ++j) {
    auto wp = w, wm = w;
    wp[j] += h;
    wm[j] -= h;
    const double fd = (LogisticRegression::loss_and_gradient(rows, labels, wp, b, l2, nullptr, nullptr) -
                       LogisticRegression::loss_and_gradient(rows, labels, wm, b, l2, nullptr, nullptr)) /
                      (2 * h);
    EXPECT_LT(relative_error(fd, gw[j]), 1e-5) << "coordinate " << j;
  }
  const double fdb = (LogisticRegression::loss_and_gradient(rows, labels, w, b + h, l2, nullptr, nullptr) -
                      LogisticRegression::loss_and_gradient(rows, labels, w, b - h, l2, nullptr, nullptr)) /
                     (2 * h);
  EXPECT_LT(relative_error(fdb, gb), 1e-5);
}

std::pair<std::vector<std::vector<double>>, std::vector<int>> separable(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < n; ++i) {
    const int y = i % 2;
    rows.push_back({y ? u(rng) : -u(rng), u(rng) - 0.5, u(rng) - 0.5});
    labels.push_back(y);
  }
  return {rows, labels};
}

TEST(UserClassifier, SeparableHeldOut) {
  for (auto kind : {ClassifierKind::LogReg, ClassifierKind::GBT}) {
    const auto [train_x, train_y] = separable(40, 1);
    const auto [test_x, test_y] = separable(40, 2);
    ClassifierConfig cfg;
    cfg.kind = kind;
    const auto model = train_user_classifier(train_x, train_y, cfg);
    EXPECT_EQ(model->kind(), kind);
    const auto p = model->predict_proba(test_x);
    int correct = 0;
    for (std::size_t i = 0; i < p.size(); ++i) correct += (p[i] >= 0.5) == (test_y[i] == 1);
    EXPECT_EQ(correct, 40) << to_string(kind);
  }
}

TEST(UserClassifier, NoSignalAucNearHalf) {
  std::mt19937_64 rng(3);
  std::vector<std::vector<double>> rows(60, std::vector<double>{1.0, 2.0});
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) labels.push_back(static_cast<int>(rng() % 2));
  const auto model = train_user_classifier(rows, labels);
  const double auc = roc_auc(model->predict_proba(rows), labels);
  EXPECT_NEAR(auc, 0.5, 0.1);
}

TEST(UserClassifier, DegenerateBalance) {
  std::vector<std::vector<double>> rows(10, std::vector<double>{0.0});
  std::vector<int> labels(10, 0);
  labels[0] = 1;
  EXPECT_THROW(train_user_classifier(rows, labels), TrainingError);
  EXPECT_THROW(parse_classifier("ffnn"), ConfigError);
  EXPECT_EQ(parse_classifier("gbt"), ClassifierKind::GBT);
}

TEST(Metrics, HandValues) {
  const std::vector<double> p = {0.9, 0.8, 0.4, 0.6, 0.2, 0.1};
  const std::vector<int> y = {1, 1, 1, 0, 0, 0};
  const auto m = binary_metrics(p, y);
  // Predicted positive: 0.9, 0.8, 0.6 -> TP 2, FP 1, FN 1.
  EXPECT_DOUBLE_EQ(m.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.f1, 2.0 / 3.0);
  // Positive/negative pairs ranked correctly: 8 of 9.
  EXPECT_DOUBLE_EQ(m.auc, 8.0 / 9.0);
  EXPECT_DOUBLE_EQ(roc_auc(std::vector<double>{0.5, 0.5}, std::vector<int>{1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(roc_auc(std::vector<double>{0.2, 0.7}, std::vector<int>{1, 1}), 0.5);
  const auto none = binary_metrics(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 0});
  EXPECT_DOUBLE_EQ(none.precision, 0.0);
  EXPECT_DOUBLE_EQ(none.f1, 0.0);
}

TEST(PostLabels, InheritedFromAuthors) {
  Corpus c({tweet("1", "h", "a"), tweet("2", "r", "b"), tweet("3", "x", "c"), tweet("4", "n", "d")}, {},
           {{"h", Label::HM}, {"r", Label::R}, {"n", Label::N}});
  const std::vector<std::string> authors = {"h", "r", "x"};
  const auto posts = inherit_post_labels(c, authors);
  ASSERT_EQ(posts.size(), 2u);
  EXPECT_EQ(posts[0].id, "1");
  EXPECT_EQ(posts[0].label, 1);
  EXPECT_EQ(posts[1].id, "2");
  EXPECT_EQ(posts[1].label, 0);
}

}  // namespace
}  // namespace echonet
