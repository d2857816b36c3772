#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <json.hpp>

#include "echonet/error.hpp"
#include "echonet/user_repr.hpp"

namespace echonet {
namespace {

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() * static_cast<double>(n)); }

 private:
  std::mt19937_64 rng_;
};

// Draws an index proportional to the (unnormalized) weights.
std::size_t sample(const std::vector<double>& weights, Uniform& u) {
  double total = 0.0;
  for (double w : weights) total += w;
  double r = u.next() * total;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    r -= weights[k];
    if (r < 0.0) return k;
  }
  return weights.size() - 1;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct GibbsState {
  std::size_t topics;
  std::size_t vocab;
  std::vector<std::vector<int>> words;   // per doc
  std::vector<std::vector<int>> z;       // per doc
  std::vector<std::vector<long>> n_dk;   // doc x topic
  std::vector<std::vector<long>> n_kw;   // topic x word
  std::vector<long> n_k;

  double log_likelihood(double alpha, double beta) const {
    const double K = static_cast<double>(topics);
    const double V = static_cast<double>(vocab);
    double ll = K * (std::lgamma(V * beta) - V * std::lgamma(beta));
    for (std::size_t k = 0; k < topics; ++k) {
      for (std::size_t w = 0; w < vocab; ++w) ll += std::lgamma(n_kw[k][w] + beta);
      ll -= std::lgamma(n_k[k] + V * beta);
    }
    const double D = static_cast<double>(words.size());
    ll += D * (std::lgamma(K * alpha) - K * std::lgamma(alpha));
    for (std::size_t d = 0; d < words.size(); ++d) {
      for (std::size_t k = 0; k < topics; ++k) ll += std::lgamma(n_dk[d][k] + alpha);
      ll -= std::lgamma(static_cast<double>(words[d].size()) + K * alpha);
    }
    return ll;
  }
};

}  // namespace

int TopicModel::word_index(std::string_view token) const {
  auto it = std::lower_bound(vocab.begin(), vocab.end(), token);
  if (it == vocab.end() || *it != token) return -1;
  return static_cast<int>(it - vocab.begin());
}

TopicModel fit_topic_model(std::span<const std::vector<std::string>> docs, const TopicModelConfig& cfg) {
  if (cfg.topics < 1) throw ConfigError("topic count must be >= 1");
  if (cfg.beta <= 0.0) throw ConfigError("beta must be positive");
  if (cfg.iterations < 0) throw ConfigError("iteration count must be non-negative");

  std::map<std::string, int> df;
  for (const auto& doc : docs) {
    std::vector<std::string> unique(doc.begin(), doc.end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    for (const auto& t : unique) ++df[t];
  }
  TopicModel model;
  model.topics = cfg.topics;
  model.alpha = cfg.alpha > 0.0 ? cfg.alpha : 50.0 / cfg.topics;
  model.beta = cfg.beta;
  model.iterations = cfg.iterations;
  model.seed = cfg.seed;
  for (const auto& [t, n] : df)
    if (n >= cfg.min_df) model.vocab.push_back(t);
  if (model.vocab.empty()) throw DataError("topic model vocabulary is empty after min-df pruning");

  GibbsState st;
  st.topics = static_cast<std::size_t>(cfg.topics);
  st.vocab = model.vocab.size();
  std::size_t non_empty = 0;
  for (const auto& doc : docs) {
    std::vector<int> ids;
    for (const auto& t : doc)
      if (int w = model.word_index(t); w >= 0) ids.push_back(w);
    non_empty += !ids.empty();
    st.words.push_back(std::move(ids));
  }
  if (non_empty < st.topics)
    throw DataError("topic model needs at least " + std::to_string(st.topics) + " non-empty documents, got " +
                    std::to_string(non_empty));

  const std::size_t K = st.topics;
  const double alpha = model.alpha;
  const double beta = model.beta;
  const double vbeta = beta * static_cast<double>(st.vocab);
  Uniform u(cfg.seed);
  st.n_dk.assign(st.words.size(), std::vector<long>(K, 0));
  st.n_kw.assign(K, std::vector<long>(st.vocab, 0));
  st.n_k.assign(K, 0);
  st.z.resize(st.words.size());
  for (std::size_t d = 0; d < st.words.size(); ++d) {
    st.z[d].resize(st.words[d].size());
    for (std::size_t i = 0; i < st.words[d].size(); ++i) {
      const int k = static_cast<int>(u.below(K));
      st.z[d][i] = k;
      ++st.n_dk[d][k];
      ++st.n_kw[k][st.words[d][i]];
      ++st.n_k[k];
    }
  }

  std::vector<double> p(K);
  for (int sweep = 1; sweep <= cfg.iterations; ++sweep) {
    for (std::size_t d = 0; d < st.words.size(); ++d) {
      for (std::size_t i = 0; i < st.words[d].size(); ++i) {
        const int w = st.words[d][i];
        int k = st.z[d][i];
        --st.n_dk[d][k];
        --st.n_kw[k][w];
        --st.n_k[k];
        for (std::size_t t = 0; t < K; ++t)
          p[t] = (st.n_dk[d][t] + alpha) * (st.n_kw[t][w] + beta) / (st.n_k[t] + vbeta);
        k = static_cast<int>(sample(p, u));
        st.z[d][i] = k;
        ++st.n_dk[d][k];
        ++st.n_kw[k][w];
        ++st.n_k[k];
      }
    }
    if (cfg.likelihood_every > 0 && sweep % cfg.likelihood_every == 0)
      model.log_likelihood.emplace_back(sweep, st.log_likelihood(alpha, beta));
  }

  model.phi.assign(K, std::vector<double>(st.vocab, 0.0));
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t w = 0; w < st.vocab; ++w)
      model.phi[k][w] = (st.n_kw[k][w] + beta) / (st.n_k[k] + vbeta);
  model.assignments = std::move(st.z);
  return model;
}

UserVector infer_topics(std::string_view user_id, std::span<const std::string> doc, const TopicModel& model,
                        const InferenceConfig& cfg) {
  const std::size_t K = static_cast<std::size_t>(model.topics);
  UserVector uv{std::string(user_id), ReprKind::TM_F, std::vector<double>(K, 1.0 / K), false};
  std::vector<int> words;
  for (const auto& t : doc)
    if (int w = model.word_index(t); w >= 0) words.push_back(w);
  if (words.empty()) {
    uv.degenerate = true;
    return uv;
  }
  Uniform u(cfg.seed);
  std::vector<int> z(words.size());
  std::vector<long> n_k(K, 0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    z[i] = static_cast<int>(u.below(K));
    ++n_k[z[i]];
  }
  std::vector<double> p(K);
  std::vector<double> theta(K, 0.0);
  const double denom = static_cast<double>(words.size()) + K * model.alpha;
  for (int sweep = 0; sweep < cfg.burn_in + cfg.samples; ++sweep) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      --n_k[z[i]];
      for (std::size_t t = 0; t < K; ++t) p[t] = (n_k[t] + model.alpha) * model.phi[t][words[i]];
      z[i] = static_cast<int>(sample(p, u));
      ++n_k[z[i]];
    }
    if (sweep >= cfg.burn_in)
      for (std::size_t t = 0; t < K; ++t) theta[t] += (n_k[t] + model.alpha) / denom;
  }
  if (cfg.samples > 0) {
    double total = 0.0;
    for (double v : theta) total += v;
    for (std::size_t t = 0; t < K; ++t) uv.values[t] = theta[t] / total;
  } else {
    for (std::size_t t = 0; t < K; ++t) uv.values[t] = (n_k[t] + model.alpha) / denom;
  }
  return uv;
}

std::vector<UserVector> infer_topics_batch(std::span<const std::string> user_ids,
                                           std::span<const std::vector<std::string>> docs,
                                           const TopicModel& model, const InferenceConfig& cfg) {
  if (user_ids.size() != docs.size()) throw ConfigError("user id and document counts differ");
  std::vector<UserVector> out(docs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < docs.size(); ++i) {
    InferenceConfig local = cfg;
    local.seed = mix(cfg.seed, i);
    out[i] = infer_topics(user_ids[i], docs[i], model, local);
  }
  return out;
}

void write_topic_model(std::ostream& os, const TopicModel& model) {
  nlohmann::json j = {{"topics", model.topics}, {"alpha", model.alpha}, {"beta", model.beta},
                      {"iterations", model.iterations}, {"seed", model.seed},
                      {"vocab", model.vocab}, {"phi", model.phi}};
  os << j.dump() << '\n';
}

TopicModel read_topic_model(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError("topic model file is not a JSON object");
  TopicModel m;
  try {
    m.topics = j.at("topics").get<int>();
    m.alpha = j.at("alpha").get<double>();
    m.beta = j.at("beta").get<double>();
    m.iterations = j.at("iterations").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.vocab = j.at("vocab").get<std::vector<std::string>>();
    m.phi = j.at("phi").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("topic model file: ") + e.what());
  }
  if (m.phi.size() != static_cast<std::size_t>(m.topics) || !std::is_sorted(m.vocab.begin(), m.vocab.end()))
    throw DataError("topic model file is inconsistent");
  for (const auto& row : m.phi)
    if (row.size() != m.vocab.size()) throw DataError("topic model phi row has the wrong width");
  return m;
}

}  // namespace echonet
