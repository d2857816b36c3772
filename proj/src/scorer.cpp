#include "echonet/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "echonet/error.hpp"

namespace echonet {
namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double dot(const SparseRow& row, std::span<const double> w) {
  double s = 0.0;
  for (const auto& [b, v] : row) s += w[b] * v;
  return s;
}

}  // namespace

std::vector<LabeledPost> inherit_post_labels(const Corpus& corpus, std::span<const std::string> authors) {
  std::vector<LabeledPost> posts;
  for (const auto& author : authors) {
    const auto label = corpus.label(author);
    if (!label) continue;
    for (const Tweet* t : corpus.timeline(author))
      posts.push_back({t->tweet_id, t->text, *label == Label::HM ? 1 : 0});
  }
  return posts;
}

std::vector<double> score_posts(PostScorer& scorer, std::span<const Tweet> tweets) {
  if (tweets.empty()) return {};
  std::vector<std::string> texts;
  texts.reserve(tweets.size());
  for (const auto& t : tweets) texts.push_back(t.text);
  return scorer.score(texts);
}

ReferenceScorer::ReferenceScorer(ReferenceScorerConfig cfg)
    : cfg_(std::move(cfg)), weights_(cfg_.features.buckets, 0.0) {}

double ReferenceScorer::loss_and_gradient(std::span<const SparseRow> rows, std::span<const int> labels,
                                          std::span<const double> weights, double bias, double l2,
                                          std::vector<double>* grad_w, double* grad_b) {
  const double n = static_cast<double>(rows.size());
  double loss = 0.0;
  if (grad_w) grad_w->assign(weights.size(), 0.0);
  double gb = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double z = dot(rows[i], weights) + bias;
    // -[y log p + (1 - y) log(1 - p)] = softplus(z) - y z
    loss += softplus(z) - labels[i] * z;
    const double r = (sigmoid(z) - labels[i]) / n;
    gb += r;
    if (grad_w)
      for (const auto& [b, v] : rows[i]) (*grad_w)[b] += r * v;
  }
  loss /= n;
  double sq = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) sq += weights[j] * weights[j];
  loss += 0.5 * l2 * sq;
  if (grad_w)
    for (std::size_t j = 0; j < weights.size(); ++j) (*grad_w)[j] += l2 * weights[j];
  if (grad_b) *grad_b = gb;
  return loss;
}

void ReferenceScorer::train(std::span<const LabeledPost> posts) {
  std::set<int> classes;
  for (const auto& p : posts) classes.insert(p.label ? 1 : 0);
  if (classes.size() < 2) throw TrainingError("reference scorer needs both classes in its training posts");

  std::vector<SparseRow> rows;
  std::vector<int> labels;
  rows.reserve(posts.size());
  trained_ids_.clear();
  for (const auto& p : posts) {
    rows.push_back(hashed_char_ngrams(p.text, cfg_.features));
    labels.push_back(p.label ? 1 : 0);
    trained_ids_.push_back(p.id);
  }
  weights_.assign(cfg_.features.buckets, 0.0);
  bias_ = 0.0;
  // Rows have unit norm, so with the bias column |x|^2 <= 2 and the mean
  // log-loss has a (0.25 * 2)-Lipschitz gradient.
  const double step = 1.0 / (0.5 + cfg_.l2);
  std::vector<double> grad;
  double gb = 0.0;
  double previous = loss_and_gradient(rows, labels, weights_, bias_, cfg_.l2, &grad, &gb);
  epochs_ = 0;
  for (int epoch = 1; epoch <= cfg_.max_epochs; ++epoch) {
    for (std::size_t j = 0; j < weights_.size(); ++j) weights_[j] -= step * grad[j];
    bias_ -= step * gb;
    epochs_ = epoch;
    const double current = loss_and_gradient(rows, labels, weights_, bias_, cfg_.l2, &grad, &gb);
    if (std::abs(previous - current) < cfg_.tolerance) break;
    previous = current;
  }
}

double ReferenceScorer::score_one(std::string_view text) const {
  return sigmoid(dot(hashed_char_ngrams(text, cfg_.features), weights_) + bias_);
}

std::vector<double> ReferenceScorer::score(std::span<const std::string> texts) {
  std::vector<double> out(texts.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < texts.size(); ++i) out[i] = score_one(texts[i]);
  return out;
}

}  // namespace echonet
