#include "echonet/synthetic.hpp"

#include <algorithm>
#include <random>
#include <map>
#include <set>

#include "echonet/error.hpp"
#include "echonet/timestamp.hpp"

namespace echonet {
namespace {

std::string user_name(int i) {
  std::string s = std::to_string(i);
  return "u" + std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

std::string filler_word(int i) {
  static const char* kSyl[] = {"ka", "lo", "mi", "ne", "ru", "ta", "vo", "zi", "pe", "su"};
  std::string w;
  int x = i + 10;
  while (x > 0) {
    w += kSyl[x % 10];
    x /= 10;
  }
  return w;
}

Timestamp base_time() { return parse_rfc3339("2017-01-01T00:00:00Z"); }

UserRecord make_user(const std::string& id, std::mt19937_64& rng) {
  UserRecord u;
  u.user_id = id;
  u.handle = "h_" + id;
  u.created_at = parse_rfc3339("2014-06-01T00:00:00Z") + std::chrono::seconds(rng() % (86400ULL * 700));
  u.friends_count = static_cast<long long>(rng() % 2000);
  u.followers_count = static_cast<long long>(rng() % 2000);
  return u;
}

// Distinct draws from `pool` without `self`.
std::vector<int> pick(const std::vector<int>& pool, int self, int count, std::mt19937_64& rng) {
  std::vector<int> cands;
  for (int p : pool)
    if (p != self) cands.push_back(p);
  std::shuffle(cands.begin(), cands.end(), rng);
  if (static_cast<int>(cands.size()) > count) cands.resize(count);
  return cands;
}

}  // namespace

Corpus generate_planted_corpus(const PlantedCorpusConfig& cfg) {
  if (cfg.users < 4 || cfg.tweets_per_user < 1 || cfg.hm_fraction <= 0.0 || cfg.hm_fraction >= 1.0)
    throw ConfigError("invalid planted corpus configuration");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n_hm = std::max(2, static_cast<int>(cfg.users * cfg.hm_fraction));
  std::vector<int> hm, other;
  for (int i = 0; i < cfg.users; ++i) (i < n_hm ? hm : other).push_back(i);

  std::vector<Tweet> tweets;
  std::vector<UserRecord> users;
  std::map<std::string, Label> labels;
  int tweet_no = 0;
  for (int i = 0; i < cfg.users; ++i) {
    const bool is_hm = i < n_hm;
    const std::string id = user_name(i);
    users.push_back(make_user(id, rng));
    labels[id] = is_hm ? Label::HM : (i % 2 ? Label::R : Label::N);

    std::vector<int> targets;
    if (is_hm) {
      targets = pick(hm, i, cfg.hm_targets, rng);
    } else {
      std::vector<int> from_other = pick(other, i, cfg.other_targets, rng);
      for (int t : from_other) {
        if (unit(rng) < cfg.other_hm_prob) {
          targets.push_back(hm[rng() % hm.size()]);
        } else {
          targets.push_back(t);
        }
      }
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    }
    // Each target is mentioned in `mentions_per_target` distinct tweets.
    std::vector<std::vector<std::string>> per_tweet(cfg.tweets_per_user);
    int slot = 0;
    for (int t : targets) {
      for (int m = 0; m < cfg.mentions_per_target; ++m) {
        per_tweet[(slot + m) % cfg.tweets_per_user].push_back(user_name(t));
      }
      slot += cfg.mentions_per_target;
    }

    const double marker_rate = is_hm ? cfg.marker_rate_hm : cfg.marker_rate_other;
    for (int k = 0; k < cfg.tweets_per_user; ++k) {
      Tweet t;
      t.tweet_id = "t" + std::to_string(++tweet_no);
      t.author_id = id;
      t.created_at = base_time() + std::chrono::seconds(rng() % (86400ULL * 365));
      t.language = "en";
      std::string text;
      auto& ms = per_tweet[k];
      std::sort(ms.begin(), ms.end());
      ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
      const int words = 8 + static_cast<int>(rng() % 8);
      const bool marked = unit(rng) < marker_rate;
      const int marker_at = marked ? static_cast<int>(rng() % words) : -1;
      for (int w = 0; w < words; ++w) {
        if (w == marker_at) text += cfg.marker + " ";
        text += filler_word(static_cast<int>(rng() % cfg.filler_vocab));
        if (w + 1 < words) text += ' ';
      }
      t.text = std::move(text);
      t.mentions = std::move(ms);
      tweets.push_back(std::move(t));
    }
  }
  return Corpus(std::move(tweets), std::move(users), std::move(labels));
}

BlobData generate_blobs(int k, int per_blob, int dim, double separation, double sigma, std::uint64_t seed) {
  if (k < 1 || per_blob < 1 || dim < k) throw ConfigError("invalid blob configuration");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  BlobData data;
  for (int c = 0; c < k; ++c) {
    for (int p = 0; p < per_blob; ++p) {
      std::vector<double> x(dim);
      for (int d = 0; d < dim; ++d) x[d] = noise(rng);
      x[c] += separation;
      data.points.push_back(std::move(x));
      data.labels.push_back(c);
    }
  }
  return data;
}

TopicCorpus generate_topic_corpus(int topics, int users_per_topic, int words_per_topic, int tweets_per_user,
                                  int words_per_tweet, std::uint64_t seed) {
  if (topics < 1 || users_per_topic < 1 || words_per_topic < 1 || tweets_per_user < 1 || words_per_tweet < 1)
    throw ConfigError("invalid topic corpus configuration");
  std::mt19937_64 rng(seed);
  static const Label kLabels[] = {Label::HM, Label::R, Label::N};
  TopicCorpus out;
  std::vector<Tweet> tweets;
  std::vector<UserRecord> users;
  std::map<std::string, Label> labels;
  int tweet_no = 0;
  for (int topic = 0; topic < topics; ++topic) {
    for (int u = 0; u < users_per_topic; ++u) {
      const std::string id = user_name(topic * users_per_topic + u);
      out.users.push_back(id);
      out.planted.push_back(topic);
      users.push_back(make_user(id, rng));
      labels[id] = kLabels[topic % 3];
      for (int k = 0; k < tweets_per_user; ++k) {
        Tweet t;
        t.tweet_id = "t" + std::to_string(++tweet_no);
        t.author_id = id;
        t.created_at = base_time() + std::chrono::seconds(rng() % (86400ULL * 365));
        t.language = "en";
        for (int w = 0; w < words_per_tweet; ++w) {
          if (w) t.text += ' ';
          t.text += "w" + std::to_string(topic) + "x" + filler_word(static_cast<int>(rng() % words_per_topic));
        }
        tweets.push_back(std::move(t));
      }
    }
  }
  out.corpus = Corpus(std::move(tweets), std::move(users), std::move(labels));
  return out;
}

}  // namespace echonet
