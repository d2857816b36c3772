#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "echonet/corpus.hpp"

namespace echonet {

// user id -> group name ("HM", "R+N", ...)
using Grouping = std::map<std::string, std::string>;

// Groups labels; `merge_rn` puts R and N together as "R+N".
Grouping group_labels(const std::map<std::string, Label>& labels, bool merge_rn);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct GroupStats {
  std::string group;
  std::size_t n_users = 0;
  std::size_t n_tweets = 0;
  MeanStd days_active;
  MeanStd tweets_per_day;
  MeanStd friends;
  MeanStd followers;
  MeanStd pct_replies;
  MeanStd pct_retweets;
  MeanStd pct_url;
  MeanStd pct_hashtags;
  bool empty = false;
};

// One row per group (ascending name), plus zero rows flagged `empty` for
// any name in `expected_groups` with no members. Throws DataError when a
// grouped user has no user record.
std::vector<GroupStats> group_stats(const Corpus& corpus, const Grouping& grouping, Timestamp as_of,
                                    std::span<const std::string> expected_groups = {});

struct OddsReport {
  std::string term;
  std::size_t hits_A = 0, tweets_A = 0;
  std::size_t hits_B = 0, tweets_B = 0;
  double rate_A = 0.0;
  double rate_B = 0.0;
  double ratio = 1.0;  // +inf or NaN possible only with smoothing == 0
};

// rate = (tweets containing term + s) / (group tweets + 2 s); ratio =
// rate_A / rate_B. Case-insensitive exact token match; '#' is ignored.
// With smoothing 0, a zero rate_B gives +inf (or NaN when rate_A is also 0).
// Throws DataError if the groups overlap.
OddsReport term_odds(const Corpus& corpus, const std::set<std::string>& group_A,
                     const std::set<std::string>& group_B, std::string_view term, double smoothing = 0.5);

// Top-n hashtags by number of tweets, ties in lexicographic order.
std::vector<std::pair<std::string, std::size_t>> top_hashtags(const Corpus& corpus, const std::set<std::string>& group,
                                                              std::size_t n);

struct IraEngagement {
  std::string group;
  std::size_t group_users = 0;
  std::size_t group_tweets = 0;
  std::size_t users_mentioning = 0;
  std::size_t users_retweeting = 0;
  std::size_t unique_ira_mentioned = 0;
  std::size_t unique_ira_retweeted = 0;
  std::size_t total_mentions = 0;
  std::size_t total_retweets = 0;

  double users_mentioning_per_user() const;
  double users_retweeting_per_user() const;
  double mentions_per_tweet() const;
  double retweets_per_tweet() const;
};

std::set<std::string> read_ira_handles(std::istream& in);
std::set<std::string> load_ira_handles(const std::string& path);

// Engagement counts per group. An engaged account matches when its id
// (lowercased, leading '@' dropped) or the handle of the user record with
// that id is in `ira_handles`. Throws ConfigError on an empty handle set.
std::vector<IraEngagement> ira_engagement(const Corpus& corpus, const Grouping& grouping,
                                          const std::set<std::string>& ira_handles);

}  // namespace echonet
