#include "echonet/group_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

#include "echonet/error.hpp"
#include "echonet/user_repr.hpp"

namespace echonet {
namespace {

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(var / static_cast<double>(xs.size()));
  return m;
}

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool contains_sequence(const std::vector<std::string>& tokens, const std::vector<std::string>& needle) {
  if (needle.empty() || tokens.size() < needle.size()) return false;
  return std::search(tokens.begin(), tokens.end(), needle.begin(), needle.end()) != tokens.end();
}

}  // namespace

Grouping group_labels(const std::map<std::string, Label>& labels, bool merge_rn) {
  Grouping g;
  for (const auto& [user, l] : labels)
    g[user] = merge_rn && l != Label::HM ? std::string("R+N") : std::string(to_string(l));
  return g;
}

std::vector<GroupStats> group_stats(const Corpus& corpus, const Grouping& grouping, Timestamp as_of,
                                    std::span<const std::string> expected_groups) {
  std::map<std::string, std::vector<std::string>> members;
  for (const auto& [user, group] : grouping) members[group].push_back(user);
  for (const auto& g : expected_groups) members[g];

  std::vector<GroupStats> out;
  for (const auto& [group, users] : members) {
    GroupStats s;
    s.group = group;
    s.n_users = users.size();
    s.empty = users.empty();
    std::vector<double> days, tpd, friends, followers, rep, rt, url, tag;
    for (const auto& u : users) {
      const UserRecord* rec = corpus.user(u);
      if (!rec) throw DataError("user '" + u + "' has no user record");
      const auto timeline = corpus.timeline(u);
      s.n_tweets += timeline.size();
      const AccountStats a = account_stats(*rec, timeline, as_of);
      days.push_back(a.days_active);
      tpd.push_back(a.tweets_per_day);
      friends.push_back(static_cast<double>(rec->friends_count));
      followers.push_back(static_cast<double>(rec->followers_count));
      rep.push_back(a.pct_replies);
      rt.push_back(a.pct_retweets);
      url.push_back(a.pct_url);
      tag.push_back(a.pct_hashtags);
    }
    s.days_active = mean_std(days);
    s.tweets_per_day = mean_std(tpd);
    s.friends = mean_std(friends);
    s.followers = mean_std(followers);
    s.pct_replies = mean_std(rep);
    s.pct_retweets = mean_std(rt);
    s.pct_url = mean_std(url);
    s.pct_hashtags = mean_std(tag);
    out.push_back(std::move(s));
  }
  return out;
}

OddsReport term_odds(const Corpus& corpus, const std::set<std::string>& group_A,
                     const std::set<std::string>& group_B, std::string_view term, double smoothing) {
  for (const auto& u : group_A)
    if (group_B.count(u)) throw DataError("term odds groups overlap at user '" + u + "'");
  if (smoothing < 0.0) throw ConfigError("smoothing must be non-negative");
  const auto needle = tokenize(term);
  OddsReport r;
  r.term = std::string(term);
  auto count = [&](const std::set<std::string>& group, std::size_t& hits, std::size_t& tweets) {
    for (const auto& u : group) {
      for (const Tweet* t : corpus.timeline(u)) {
        ++tweets;
        hits += contains_sequence(tokenize(t->text), needle);
      }
    }
  };
  count(group_A, r.hits_A, r.tweets_A);
  count(group_B, r.hits_B, r.tweets_B);
  auto rate = [smoothing](std::size_t hits, std::size_t tweets) {
    const double denom = static_cast<double>(tweets) + 2.0 * smoothing;
    if (denom == 0.0) return 0.0;
    return (static_cast<double>(hits) + smoothing) / denom;
  };
  r.rate_A = rate(r.hits_A, r.tweets_A);
  r.rate_B = rate(r.hits_B, r.tweets_B);
  if (r.rate_B > 0.0) {
    r.ratio = r.rate_A / r.rate_B;
  } else {
    r.ratio = r.rate_A > 0.0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

std::vector<std::pair<std::string, std::size_t>> top_hashtags(const Corpus& corpus, const std::set<std::string>& group,
                                                              std::size_t n) {
  std::map<std::string, std::size_t> counts;
  for (const auto& u : group)
    for (const Tweet* t : corpus.timeline(u))
      for (const auto& h : t->hashtags) ++counts[h];
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // counts is ordered by tag, so a stable sort keeps ties lexicographic.
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

double IraEngagement::users_mentioning_per_user() const {
  return group_users ? static_cast<double>(users_mentioning) / group_users : 0.0;
}
double IraEngagement::users_retweeting_per_user() const {
  return group_users ? static_cast<double>(users_retweeting) / group_users : 0.0;
}
double IraEngagement::mentions_per_tweet() const {
  return group_tweets ? static_cast<double>(total_mentions) / group_tweets : 0.0;
}
double IraEngagement::retweets_per_tweet() const {
  return group_tweets ? static_cast<double>(total_retweets) / group_tweets : 0.0;
}

std::set<std::string> read_ira_handles(std::istream& in) {
  std::set<std::string> handles;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r@");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    handles.insert(lowercase(line.substr(b, e - b + 1)));
  }
  return handles;
}

std::set<std::string> load_ira_handles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_ira_handles(in);
}

std::vector<IraEngagement> ira_engagement(const Corpus& corpus, const Grouping& grouping,
                                          const std::set<std::string>& ira_handles) {
  if (ira_handles.empty()) throw ConfigError("IRA handle set is empty");
  // Resolves an engaged account to the matching IRA handle, if any.
  auto match = [&](const std::string& account) -> std::optional<std::string> {
    std::string id = account;
    if (!id.empty() && id.front() == '@') id.erase(0, 1);
    id = lowercase(std::move(id));
    if (ira_handles.count(id)) return id;
    if (const UserRecord* rec = corpus.user(account)) {
      const std::string h = lowercase(rec->handle);
      if (ira_handles.count(h)) return h;
    }
    return std::nullopt;
  };

  std::map<std::string, std::vector<std::string>> members;
  for (const auto& [user, group] : grouping) members[group].push_back(user);
  std::vector<IraEngagement> out;
  for (const auto& [group, users] : members) {
    IraEngagement e;
    e.group = group;
    e.group_users = users.size();
    std::set<std::string> mentioned, retweeted;
    for (const auto& u : users) {
      bool did_mention = false, did_retweet = false;
      for (const Tweet* t : corpus.timeline(u)) {
        ++e.group_tweets;
        for (const auto& m : t->mentions) {
          if (auto h = match(m)) {
            ++e.total_mentions;
            mentioned.insert(*h);
            did_mention = true;
          }
        }
        if (t->retweet_of_user) {
          if (auto h = match(*t->retweet_of_user)) {
            ++e.total_retweets;
            retweeted.insert(*h);
            did_retweet = true;
          }
        }
      }
      e.users_mentioning += did_mention;
      e.users_retweeting += did_retweet;
    }
    e.unique_ira_mentioned = mentioned.size();
    e.unique_ira_retweeted = retweeted.size();
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace echonet
