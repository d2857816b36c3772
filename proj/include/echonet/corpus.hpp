#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "echonet/timestamp.hpp"

namespace echonet {

enum class Label { HM, R, N };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);  // throws DataError

struct Tweet {
  std::string tweet_id;
  std::string author_id;
  std::string text;
  Timestamp created_at{};
  std::vector<std::string> mentions;  // deduplicated, first-seen order
  std::vector<std::string> hashtags;  // lowercase, deduplicated
  int urls = 0;
  std::optional<std::string> in_reply_to_user;
  std::optional<std::string> retweet_of_user;
  std::string language = "und";

  bool is_reply() const { return in_reply_to_user.has_value(); }
  bool is_retweet() const { return retweet_of_user.has_value(); }
};

struct UserRecord {
  std::string user_id;
  std::string handle;
  Timestamp created_at{};
  long long friends_count = 0;
  long long followers_count = 0;
  std::optional<Label> label;
  std::optional<bool> suspended;
};

struct CorpusFilterConfig {
  int min_echo_uses = 3;
  std::string language = "en";
};

struct AccountStats {
  double days_active = 0.0;
  double tweets_per_day = 0.0;
  double pct_replies = 0.0;
  double pct_retweets = 0.0;
  double pct_url = 0.0;
  double pct_hashtags = 0.0;
};

// Parses one line of tweets.jsonl. `line_no` is 1-based and only used in
// error messages. Throws ParseError (malformed JSON / field type) or
// SchemaError (missing id, author or text).
Tweet parse_tweet_record(std::string_view line, std::size_t line_no = 1);
UserRecord parse_user_record(std::string_view line, std::size_t line_no = 1);

// Serializes back to the tweets.jsonl schema.
std::string to_jsonl(const Tweet& tweet);

struct RecordError {
  std::size_t line = 0;
  std::string code;
  std::string message;
};

template <typename T>
struct LoadResult {
  std::vector<T> records;
  std::vector<RecordError> errors;
};

// Streaming loaders: malformed lines are collected, not fatal. Blank lines
// are skipped.
LoadResult<Tweet> read_tweets(std::istream& in);
LoadResult<UserRecord> read_users(std::istream& in);
LoadResult<Tweet> load_tweets(const std::string& path);
LoadResult<UserRecord> load_users(const std::string& path);

// labels.csv with header `user_id,label`. Throws DataError on bad rows.
std::map<std::string, Label> read_labels(std::istream& in);
std::map<std::string, Label> load_labels(const std::string& path);

// Immutable tweet collection with per-author chronological indices.
class Corpus {
 public:
  Corpus() = default;
  // Throws DataError on duplicate tweet ids or duplicate user ids.
  explicit Corpus(std::vector<Tweet> tweets, std::vector<UserRecord> users = {},
                  std::map<std::string, Label> labels = {});

  const std::vector<Tweet>& tweets() const { return tweets_; }
  std::size_t size() const { return tweets_.size(); }
  bool empty() const { return tweets_.empty(); }

  // Authors in ascending id order.
  const std::vector<std::string>& authors() const { return authors_; }
  // Authors plus ids from user records, ascending.
  std::vector<std::string> all_users() const;

  // Tweets by one author, ordered by (created_at, tweet_id). Empty if none.
  std::vector<const Tweet*> timeline(std::string_view user_id) const;
  const Tweet* find_tweet(std::string_view tweet_id) const;

  const UserRecord* user(std::string_view user_id) const;
  const std::vector<UserRecord>& users() const { return users_; }
  const std::map<std::string, Label>& labels() const { return labels_; }
  std::optional<Label> label(std::string_view user_id) const;

  // New corpus holding the tweets that satisfy `keep`; users and labels are
  // carried over unchanged.
  template <typename Pred>
  Corpus filter(Pred keep) const {
    std::vector<Tweet> kept;
    for (const auto& t : tweets_)
      if (keep(t)) kept.push_back(t);
    return Corpus(std::move(kept), users_, labels_);
  }

  // Keeps at most `max_per_user` most recent tweets of each author.
  Corpus truncate_timelines(std::size_t max_per_user) const;

 private:
  std::vector<Tweet> tweets_;
  std::vector<UserRecord> users_;
  std::map<std::string, Label> labels_;
  std::vector<std::string> authors_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_author_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::map<std::string, std::size_t, std::less<>> user_index_;
};

// Tweets whose text contains at least one echo span (any variant).
Corpus extract_echo_tweets(const Corpus& corpus);

// Users with at least `min_echo_uses` echo tweets in `cfg.language`.
std::set<std::string> filter_echo_users(const Corpus& corpus, const CorpusFilterConfig& cfg);

AccountStats account_stats(const UserRecord& user, std::span<const Tweet* const> timeline,
                           Timestamp as_of);
AccountStats account_stats(const UserRecord& user, std::span<const Tweet> timeline,
                           Timestamp as_of);

}  // namespace echonet
