#pragma once

#include <array>
#include <functional>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "echonet/corpus.hpp"
#include "echonet/graph.hpp"
#include "echonet/scorer.hpp"

namespace echonet {

// Which blocks of the fused user vector are present.
struct StreamConfig {
  bool include_U = true;   // own tweet scores
  bool include_UF = false; // followees' mean scores
  bool include_FU = false; // followers' mean scores
  bool include_N = false;  // network features
  std::size_t T_max = 256;
  std::size_t F_max = 64;
  long long delta = 3;

  std::size_t feature_length() const;
  std::string name() const;  // "U+UF+N" style
};

// Throws ConfigError on an empty block selection or zero block sizes.
void validate(const StreamConfig& cfg);

// U, U+FU, U+UF+FU+N, U+N, U+UF, U+UF+N.
std::vector<StreamConfig> ablation_configs(const StreamConfig& base = {});

// Parses "U+UF+N"-style names.
StreamConfig parse_stream_config(std::string_view name, const StreamConfig& base = {});

inline constexpr std::size_t kNetworkFeatureCount = 8;
using NetworkFeatureVector = std::array<double, kNetworkFeatureCount>;

// [in-degree, out-degree, weighted in-degree, weighted out-degree,
//  betweenness, closeness, pagerank, triangle count]
inline constexpr std::array<std::string_view, kNetworkFeatureCount> kNetworkFeatureNames = {
    "in_degree", "out_degree", "weighted_in_degree", "weighted_out_degree",
    "betweenness", "closeness", "pagerank", "triangles"};

// Raw network features of every node of `g`, computed once.
class NetworkFeatureTable {
 public:
  NetworkFeatureTable() = default;
  explicit NetworkFeatureTable(const EngagementGraph& g);

  // Zeros with present == false for users outside the graph.
  NetworkFeatureVector raw(std::string_view user, bool* present = nullptr) const;

 private:
  std::vector<std::string> users_;
  std::vector<NetworkFeatureVector> rows_;
};

// Per-feature z-normalization fitted on training rows; constant features map
// to zero.
class FeatureScaler {
 public:
  void fit(std::span<const NetworkFeatureVector> rows);
  NetworkFeatureVector apply(const NetworkFeatureVector& raw) const;
  const NetworkFeatureVector& mean() const { return mean_; }
  const NetworkFeatureVector& stddev() const { return std_; }

 private:
  NetworkFeatureVector mean_{};
  NetworkFeatureVector std_{};
};

// followers(u) = {v : v -> u}, followees(u) = {v : u -> v}.
struct NeighborStreams {
  std::vector<std::string> followees;
  std::vector<std::string> followers;
};

NeighborStreams neighbor_streams(const EngagementGraph& g, std::string_view user);

NetworkFeatureVector network_features(const EngagementGraph& g, std::string_view user);
NetworkFeatureVector network_features(const NetworkFeatureTable& table, const FeatureScaler& scaler,
                                      std::string_view user);

struct FusionFeatures {
  std::string user_id;
  std::vector<double> values;
  std::vector<unsigned char> mask;  // 1 = real entry, 0 = padding / absent
  bool has_network_block = false;
  std::size_t network_offset = 0;
};

// tweet id -> post score
using ScoreTable = std::unordered_map<std::string, double>;

ScoreTable score_corpus(PostScorer& scorer, const Corpus& corpus);

// Fused vector from precomputed scores. The network block (if enabled)
// holds raw features; normalize with FeatureScaler before training.
FusionFeatures assemble_features(std::string_view user, const Corpus& corpus, const EngagementGraph& g,
                                 const ScoreTable& scores, const NetworkFeatureTable& network,
                                 const StreamConfig& cfg);

// Convenience overload that scores the tweets it needs through `scorer`.
FusionFeatures assemble_features(std::string_view user, const Corpus& corpus, const EngagementGraph& g,
                                 PostScorer& scorer, const StreamConfig& cfg);

// Replaces the raw network block with its normalized values.
void normalize_network_block(FusionFeatures& f, const FeatureScaler& scaler);

// ---------------------------------------------------------------------------
// Downstream user classifier.

enum class ClassifierKind { LogReg, GBT };

ClassifierKind parse_classifier(std::string_view text);
std::string_view to_string(ClassifierKind k);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::LogReg;
  double l2 = 1e-3;
  int max_iterations = 5000;
  double tolerance = 1e-9;
  // gbt only
  int trees = 100;
  int depth = 2;
  double learning_rate = 0.1;
  int min_leaf = 3;
  std::uint64_t seed = 0;
  std::size_t min_per_class = 5;
};

class UserClassifier {
 public:
  virtual ~UserClassifier() = default;
  virtual std::vector<double> predict_proba(std::span<const std::vector<double>> rows) const = 0;
  virtual ClassifierKind kind() const = 0;
};

class LogisticRegression final : public UserClassifier {
 public:
  LogisticRegression(std::vector<double> weights, double bias) : weights_(std::move(weights)), bias_(bias) {}

  std::vector<double> predict_proba(std::span<const std::vector<double>> rows) const override;
  ClassifierKind kind() const override { return ClassifierKind::LogReg; }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

  // Mean log-loss + (l2 / 2) |w|^2 and its gradient.
  static double loss_and_gradient(std::span<const std::vector<double>> rows, std::span<const int> labels,
                                  std::span<const double> weights, double bias, double l2,
                                  std::vector<double>* grad_w, double* grad_b);

 private:
  std::vector<double> weights_;
  double bias_;
};

// Gradient-boosted regression trees on log-loss.
class GradientBoostedTrees final : public UserClassifier {
 public:
  struct Node {
    int feature = -1;  // -1 = leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };
  using Tree = std::vector<Node>;

  GradientBoostedTrees(double base, double learning_rate, std::vector<Tree> trees)
      : base_(base), learning_rate_(learning_rate), trees_(std::move(trees)) {}

  std::vector<double> predict_proba(std::span<const std::vector<double>> rows) const override;
  ClassifierKind kind() const override { return ClassifierKind::GBT; }
  std::size_t tree_count() const { return trees_.size(); }

 private:
  double base_;
  double learning_rate_;
  std::vector<Tree> trees_;
};

// Binary HM (1) vs rest (0). Throws TrainingError with fewer than
// `min_per_class` examples in either class.
std::unique_ptr<UserClassifier> train_user_classifier(std::span<const std::vector<double>> rows,
                                                      std::span<const int> labels,
                                                      const ClassifierConfig& cfg = {});

// ---------------------------------------------------------------------------
// Evaluation.

struct BinaryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
};

// HM-class precision/recall/F1 at threshold 0.5 and ROC AUC (ties count
// one half). AUC is 0.5 when a class is missing.
BinaryMetrics binary_metrics(std::span<const double> proba, std::span<const int> labels, double threshold = 0.5);
double roc_auc(std::span<const double> proba, std::span<const int> labels);

struct FoldReport {
  int fold = 0;
  BinaryMetrics metrics;
  std::size_t train_users = 0;
  std::size_t test_users = 0;
  std::size_t scorer_training_tweets = 0;
  // Test-fold tweets found among the scorer's training tweets (must be 0).
  std::size_t leaked_tweets = 0;
};

struct EvalReport {
  std::string config;
  double precision = 0.0;  // mean over folds
  double recall = 0.0;     // mean over folds
  double f1 = 0.0;         // harmonic mean of the two means above
  double auc = 0.0;        // mean over folds
  std::vector<FoldReport> folds;
};

// Builds a fresh scorer for one fold.
using ScorerFactory = std::function<std::unique_ptr<PostScorer>()>;

struct EvaluateOptions {
  int folds = 5;
  std::uint64_t seed = 0;
  Semantics stream_semantics = Semantics::Mention;
  ClassifierConfig classifier;
  ScorerFactory scorer_factory;  // defaults to ReferenceScorer
};

// Stratified k-fold cross-validation over the gold users. Per fold the
// scorer is trained on tweets of training-fold users only. Throws
// EvaluationError when a fold lacks a class.
std::vector<EvalReport> evaluate(const Corpus& corpus, const std::map<std::string, Label>& gold,
                                 std::span<const StreamConfig> configs, const EvaluateOptions& opts = {});

// Stratified fold index per user (same order as `users`).
std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed);

}  // namespace echonet
