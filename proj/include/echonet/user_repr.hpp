#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "echonet/corpus.hpp"

namespace echonet {

enum class ReprKind { EMBD, TM_S, TM_F };

std::string_view to_string(ReprKind k);

struct UserVector {
  std::string user_id;
  ReprKind kind = ReprKind::EMBD;
  std::vector<double> values;
  // Set when the vector is a fallback: empty document, all tokens
  // out-of-vocabulary.
  bool degenerate = false;
};

// Lowercases, drops URLs and @mentions, strips '#' from hashtags and
// splits on everything that is not a word character. Echo parentheses fall
// away with the other punctuation, leaving the inner term.
std::vector<std::string> tokenize(std::string_view text);

// All tweets of `user_id` in chronological order, tokenized and concatenated.
std::vector<std::string> user_document(const Corpus& corpus, std::string_view user_id);

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 300) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  // Throws DataError on a dimension mismatch or a non-finite entry.
  void add(std::string token, std::vector<double> vector);
  const std::vector<double>* find(std::string_view token) const;

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Text vector format: optional "<count> <dim>" header, then
// "<token> <v1> ... <vdim>" per line.
EmbeddingTable read_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::string& path);

// Mean of in-vocabulary token vectors; zero vector (flagged) if none.
UserVector embed_user(std::string_view user_id, std::span<const std::string> doc, const EmbeddingTable& table);

struct TopicModelConfig {
  int topics = 30;
  double alpha = 0.0;  // <= 0 selects 50 / topics
  double beta = 0.01;
  int iterations = 1000;
  int min_df = 5;
  std::uint64_t seed = 0;
  // Record the joint log-likelihood every n sweeps (0 disables).
  int likelihood_every = 0;
};

struct TopicModel {
  int topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> vocab;         // sorted
  std::vector<std::vector<double>> phi;   // topics x vocab, rows sum to 1
  // Final token-topic assignments of the training documents, in vocab-mapped
  // token order (out-of-vocabulary tokens removed).
  std::vector<std::vector<int>> assignments;
  std::vector<std::pair<int, double>> log_likelihood;  // (sweep, value)

  int word_index(std::string_view token) const;  // -1 if absent
};

// Collapsed Gibbs sampling for LDA. Deterministic for a fixed seed.
// Throws DataError on an empty vocabulary or fewer than `topics` non-empty
// documents.
TopicModel fit_topic_model(std::span<const std::vector<std::string>> docs, const TopicModelConfig& cfg);

struct InferenceConfig {
  int burn_in = 50;
  int samples = 20;
  std::uint64_t seed = 0;
};

// Topic distribution of one document with phi held fixed. Empty (or fully
// out-of-vocabulary) documents get the uniform distribution, flagged.
UserVector infer_topics(std::string_view user_id, std::span<const std::string> doc, const TopicModel& model,
                        const InferenceConfig& cfg = {});

// Batch inference, parallel over documents. Each document's chain is seeded
// from cfg.seed and its position, so results do not depend on thread count.
std::vector<UserVector> infer_topics_batch(std::span<const std::string> user_ids,
                                           std::span<const std::vector<std::string>> docs,
                                           const TopicModel& model, const InferenceConfig& cfg = {});

// One-hot at the argmax of a TM_F vector; ties go to the lowest topic.
UserVector salient_topic(const UserVector& tm_f);

void write_topic_model(std::ostream& os, const TopicModel& model);
TopicModel read_topic_model(std::istream& in);

}  // namespace echonet
