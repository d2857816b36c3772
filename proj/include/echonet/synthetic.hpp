#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "echonet/corpus.hpp"

namespace echonet {

// Corpus with a planted HM community: HM users mention each other densely,
// everyone else mentions mostly non-HM accounts. Tweet text carries only a
// weak signal (the marker token at different rates).
struct PlantedCorpusConfig {
  int users = 500;
  double hm_fraction = 0.2;
  int tweets_per_user = 8;
  std::string marker = "zorblax";
  double marker_rate_hm = 0.30;
  double marker_rate_other = 0.03;
  int hm_targets = 6;         // distinct HM accounts each HM user mentions
  int other_targets = 6;      // distinct accounts each non-HM user mentions
  double other_hm_prob = 0.1; // chance a non-HM target is drawn from HM
  int mentions_per_target = 4;
  int filler_vocab = 300;
  std::uint64_t seed = 1;
};

Corpus generate_planted_corpus(const PlantedCorpusConfig& cfg);

struct BlobData {
  std::vector<std::vector<double>> points;
  std::vector<int> labels;
};

// `per_blob` points around each of `k` centers placed `separation` apart on
// distinct axes, isotropic noise `sigma`.
BlobData generate_blobs(int k, int per_blob, int dim, double separation, double sigma, std::uint64_t seed);

// Users whose tweets draw words from one of `topics` disjoint vocabularies.
// The planted topic of user i is `planted[i]`; users are labeled HM, R, N
// cyclically by topic.
struct TopicCorpus {
  Corpus corpus;
  std::vector<std::string> users;
  std::vector<int> planted;
};

TopicCorpus generate_topic_corpus(int topics, int users_per_topic, int words_per_topic, int tweets_per_user,
                                  int words_per_tweet, std::uint64_t seed);

}  // namespace echonet
