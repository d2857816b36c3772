#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "echonet/corpus.hpp"
#include "echonet/hashing.hpp"

namespace echonet {

struct LabeledPost {
  std::string id;
  std::string text;
  int label = 0;  // 1 = hate-monger author
};

// A post-level scorer: maps each text to a probability in [0, 1].
class PostScorer {
 public:
  virtual ~PostScorer() = default;
  virtual std::string_view transport() const = 0;
  // Throws TrainingError when only one class is present.
  virtual void train(std::span<const LabeledPost> posts) = 0;
  // One score per text, aligned with the input order.
  virtual std::vector<double> score(std::span<const std::string> texts) = 0;
};

// Posts with labels inherited from their authors (HM -> 1, R/N -> 0).
// Tweets of unlabeled authors and of authors outside `authors` are skipped.
std::vector<LabeledPost> inherit_post_labels(const Corpus& corpus, std::span<const std::string> authors);

std::vector<double> score_posts(PostScorer& scorer, std::span<const Tweet> tweets);

struct ReferenceScorerConfig {
  NgramHashConfig features;
  double l2 = 1e-4;
  int max_epochs = 200;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
};

// Logistic regression over hashed character n-grams, trained by full-batch
// gradient descent on mean log-loss + (l2 / 2) |w|^2 (bias unpenalized).
class ReferenceScorer final : public PostScorer {
 public:
  explicit ReferenceScorer(ReferenceScorerConfig cfg = {});

  std::string_view transport() const override { return "in_process_reference"; }
  void train(std::span<const LabeledPost> posts) override;
  std::vector<double> score(std::span<const std::string> texts) override;

  double score_one(std::string_view text) const;
  const ReferenceScorerConfig& config() const { return cfg_; }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  int epochs_run() const { return epochs_; }
  const std::vector<std::string>& trained_ids() const { return trained_ids_; }

  // Objective and gradient at (weights, bias); exposed for gradient checks.
  static double loss_and_gradient(std::span<const SparseRow> rows, std::span<const int> labels,
                                  std::span<const double> weights, double bias, double l2,
                                  std::vector<double>* grad_w, double* grad_b);

 private:
  ReferenceScorerConfig cfg_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  int epochs_ = 0;
  std::vector<std::string> trained_ids_;
};

struct ExternalScorerConfig {
  std::vector<std::string> argv;  // program and arguments
  std::chrono::milliseconds timeout{120000};  // per batch
};

// Child process speaking the plm/1 line protocol over stdin/stdout. Each
// score() call is one session: handshake, optional training lines and a
// train command, scoring requests, eof in both directions.
class ExternalScorer final : public PostScorer {
 public:
  explicit ExternalScorer(ExternalScorerConfig cfg);

  std::string_view transport() const override { return "external_process"; }
  void train(std::span<const LabeledPost> posts) override;
  std::vector<double> score(std::span<const std::string> texts) override;

 private:
  ExternalScorerConfig cfg_;
  std::vector<LabeledPost> training_;
};

inline constexpr std::string_view kScorerProtocol = "plm/1";

}  // namespace echonet
