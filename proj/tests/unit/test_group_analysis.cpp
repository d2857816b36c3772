#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "echonet/error.hpp"
#include "echonet/group_analysis.hpp"
#include "echonet/timestamp.hpp"
#include "fixtures.hpp"

namespace echonet {
namespace {

using testing::tweet;
using testing::user;

const Timestamp kAsOf = parse_rfc3339("2017-01-11T00:00:00Z");

Tweet reply(std::string id, std::string author) {
  auto t = tweet(std::move(id), std::move(author));
  t.in_reply_to_user = "someone";
  return t;
}

Tweet retweet(std::string id, std::string author, std::string of = "someone") {
  auto t = tweet(std::move(id), std::move(author));
  t.retweet_of_user = std::move(of);
  return t;
}

Tweet with_url(std::string id, std::string author) {
  auto t = tweet(std::move(id), std::move(author));
  t.urls = 1;
  return t;
}

Tweet tagged(std::string id, std::string author, std::vector<std::string> tags) {
  auto t = tweet(std::move(id), std::move(author));
  t.hashtags = std::move(tags);
  return t;
}

TEST(GroupLabels, MergeRule) {
  const std::map<std::string, Label> l = {{"a", Label::HM}, {"b", Label::R}, {"c", Label::N}};
  EXPECT_EQ(group_labels(l, false), (Grouping{{"a", "HM"}, {"b", "R"}, {"c", "N"}}));
  EXPECT_EQ(group_labels(l, true), (Grouping{{"a", "HM"}, {"b", "R+N"}, {"c", "R+N"}}));
}

// HM: a (10 days, 1 reply), b (20 days, url + plain), c (5 days, 2 retweets + 2 plain)
// R: d (1 tweet), e (3 tweets). N: f (2 tweets). z is unlabeled.
Corpus six_users() {
  std::vector<Tweet> tweets = {reply("1", "a"),      with_url("2", "b"),  tweet("3", "b"),   retweet("4", "c"),
                               retweet("5", "c"),    tweet("6", "c"),     tweet("7", "c"),   tweet("8", "d"),
                               tagged("9", "e", {"x"}), tweet("10", "e"), tweet("11", "e"),  tweet("12", "f"),
                               tweet("13", "f"),     tweet("14", "z")};
  std::vector<UserRecord> users = {user("a", "2017-01-01T00:00:00Z", 10, 100), user("b", "2016-12-22T00:00:00Z", 20, 200),
                                   user("c", "2017-01-06T00:00:00Z", 30, 300), user("d", "2016-01-11T00:00:00Z", 1, 1),
                                   user("e", "2016-01-11T00:00:00Z", 3, 5),    user("f", "2016-12-12T00:00:00Z", 7, 9),
                                   user("z")};
  std::map<std::string, Label> labels = {{"a", Label::HM}, {"b", Label::HM}, {"c", Label::HM},
                                         {"d", Label::R},  {"e", Label::R},  {"f", Label::N}};
  return Corpus(std::move(tweets), std::move(users), std::move(labels));
}

TEST(GroupStats, SixUserFixture) {
  const auto c = six_users();
  const std::vector<std::string> expected = {"HM", "N", "R", "R+N"};
  const auto rows = group_stats(c, group_labels(c.labels(), false), kAsOf, expected);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].group, "HM");
  EXPECT_EQ(rows[1].group, "N");
  EXPECT_EQ(rows[2].group, "R");
  EXPECT_EQ(rows[3].group, "R+N");

  const auto& hm = rows[0];
  EXPECT_EQ(hm.n_users, 3u);
  EXPECT_EQ(hm.n_tweets, 7u);
  EXPECT_DOUBLE_EQ(hm.days_active.mean, 35.0 / 3.0);
  EXPECT_NEAR(hm.days_active.std, std::sqrt(1050.0 / 27.0), 1e-12);
  // tweets/day: 1/10, 2/20, 4/5
  EXPECT_NEAR(hm.tweets_per_day.mean, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(hm.tweets_per_day.std, std::sqrt(294.0 / 2700.0), 1e-12);
  EXPECT_DOUBLE_EQ(hm.friends.mean, 20.0);
  EXPECT_NEAR(hm.friends.std, std::sqrt(200.0 / 3.0), 1e-12);
  EXPECT_DOUBLE_EQ(hm.followers.mean, 200.0);
  // replies: 1, 0, 0; retweets: 0, 0, 1/2; url: 0, 1/2, 0
  EXPECT_NEAR(hm.pct_replies.mean, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(hm.pct_replies.std, std::sqrt(2.0 / 9.0), 1e-12);
  EXPECT_NEAR(hm.pct_retweets.mean, 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(hm.pct_url.mean, 1.0 / 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(hm.pct_hashtags.mean, 0.0);
  EXPECT_FALSE(hm.empty);

  const auto& n = rows[1];
  EXPECT_EQ(n.n_users, 1u);
  EXPECT_DOUBLE_EQ(n.days_active.mean, 30.0);
  EXPECT_DOUBLE_EQ(n.days_active.std, 0.0);
  EXPECT_DOUBLE_EQ(n.friends.std, 0.0);

  const auto& r = rows[2];
  EXPECT_EQ(r.n_tweets, 4u);
  EXPECT_DOUBLE_EQ(r.days_active.mean, 366.0);
  EXPECT_NEAR(r.pct_hashtags.mean, 1.0 / 6.0, 1e-12);  // 0 and 1/3
  EXPECT_DOUBLE_EQ(r.friends.mean, 2.0);

  EXPECT_TRUE(rows[3].empty);
  EXPECT_EQ(rows[3].n_users, 0u);
}

TEST(GroupStats, TweetsPerDayMean) {
  std::vector<Tweet> tweets;
  for (int i = 0; i < 10; ++i) tweets.push_back(tweet("p" + std::to_string(i), "p"));
  for (int i = 0; i < 20; ++i) tweets.push_back(tweet("q" + std::to_string(i), "q"));
  Corpus c(std::move(tweets), {user("p", "2016-12-31T00:00:00Z"), user("q", "2016-12-31T00:00:00Z")});
  const auto rows = group_stats(c, {{"p", "G"}, {"q", "G"}}, parse_rfc3339("2017-01-01T00:00:00Z"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].tweets_per_day.mean, 15.0);
  EXPECT_DOUBLE_EQ(rows[0].tweets_per_day.std, 5.0);
}

TEST(GroupStats, MissingUserRecord) {
  Corpus c({tweet("1", "a")});
  EXPECT_THROW(group_stats(c, {{"a", "HM"}}, kAsOf), DataError);
}

TEST(GroupStats, PartitionTweetSum) {
  std::mt19937_64 rng(4);
  const auto c = six_users();
  std::size_t labeled = 0;
  for (const auto& [u, l] : c.labels()) labeled += c.timeline(u).size();
  for (int trial = 0; trial < 20; ++trial) {
    Grouping g;
    for (const auto& [u, l] : c.labels()) g[u] = "g" + std::to_string(rng() % 3);
    std::size_t sum = 0;
    for (const auto& row : group_stats(c, g, kAsOf)) {
      sum += row.n_tweets;
      EXPECT_GE(row.days_active.std, 0.0);
    }
    EXPECT_EQ(sum, labeled);
  }
}

Corpus odds_corpus(int a_tweets, int a_hits, int b_tweets, int b_hits) {
  std::vector<Tweet> tweets;
  for (int i = 0; i < a_tweets; ++i)
    tweets.push_back(tweet("a" + std::to_string(i), i % 2 ? "a1" : "a2", i < a_hits ? "the Zionist plot" : "hello"));
  for (int i = 0; i < b_tweets; ++i)
    tweets.push_back(tweet("b" + std::to_string(i), "b1", i < b_hits ? "#zionist again" : "zionists hello"));
  return Corpus(std::move(tweets));
}

const std::set<std::string> kA = {"a1", "a2"};
const std::set<std::string> kB = {"b1"};

TEST(TermOdds, HandValue) {
  const auto r = term_odds(odds_corpus(10, 3, 20, 1), kA, kB, "zionist");
  EXPECT_EQ(r.hits_A, 3u);
  EXPECT_EQ(r.tweets_A, 10u);
  EXPECT_EQ(r.hits_B, 1u);
  EXPECT_EQ(r.tweets_B, 20u);
  EXPECT_DOUBLE_EQ(r.rate_A, 3.5 / 11.0);
  EXPECT_DOUBLE_EQ(r.rate_B, 1.5 / 21.0);
  EXPECT_NEAR(r.ratio, 73.5 / 16.5, 1e-12);
  EXPECT_NEAR(term_odds(odds_corpus(10, 3, 20, 1), kA, kB, "ZIONIST", 0.0).ratio, 6.0, 1e-12);
}

TEST(TermOdds, AbsentTermEqualGroups) {
  const auto r = term_odds(odds_corpus(10, 0, 10, 0), kA, kB, "zionist");
  EXPECT_DOUBLE_EQ(r.ratio, 1.0);
}

TEST(TermOdds, SmoothingKeepsRatioFinite) {
  const auto r = term_odds(odds_corpus(10, 10, 10, 0), kA, kB, "zionist");
  EXPECT_TRUE(std::isfinite(r.ratio));
  EXPECT_NEAR(r.ratio, 21.0, 1e-12);
  EXPECT_TRUE(std::isinf(term_odds(odds_corpus(10, 10, 10, 0), kA, kB, "zionist", 0.0).ratio));
  EXPECT_TRUE(std::isnan(term_odds(odds_corpus(10, 0, 10, 0), kA, kB, "zionist", 0.0).ratio));
}

TEST(TermOdds, MultiTokenTerm) {
  const auto r = term_odds(odds_corpus(10, 3, 20, 1), kA, kB, "zionist plot", 0.0);
  EXPECT_EQ(r.hits_A, 3u);
  EXPECT_EQ(r.hits_B, 0u);
}

TEST(TermOdds, ReciprocalProperty) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int na = 1 + rng() % 30, nb = 1 + rng() % 30;
    const auto c = odds_corpus(na, rng() % (na + 1), nb, rng() % (nb + 1));
    const double s = 0.1 + (rng() % 10) / 10.0;
    const double ab = term_odds(c, kA, kB, "zionist", s).ratio;
    const double ba = term_odds(c, kB, kA, "zionist", s).ratio;
    EXPECT_NEAR(ab * ba, 1.0, 1e-9);
    EXPECT_GT(ab, 0.0);
  }
}

TEST(TermOdds, Errors) {
  const auto c = odds_corpus(4, 1, 4, 1);
  EXPECT_THROW(term_odds(c, kA, {"a1", "b1"}, "zionist"), DataError);
  EXPECT_THROW(term_odds(c, kA, kB, "zionist", -1.0), ConfigError);
}

TEST(TopHashtags, RankingAndTies) {
  Corpus c({tagged("1", "u", {"maga"}), tagged("2", "u", {"maga", "qanon"}), tagged("3", "v", {"zeta"}),
            tagged("4", "v", {"alpha"}), tagged("5", "v", {"qanon", "maga"}), tagged("6", "w", {"maga"})});
  const auto top = top_hashtags(c, {"u", "v"}, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0], (std::pair<std::string, std::size_t>{"maga", 3}));
  EXPECT_EQ(top[1], (std::pair<std::string, std::size_t>{"qanon", 2}));
  EXPECT_EQ(top[2], (std::pair<std::string, std::size_t>{"alpha", 1}));
  EXPECT_EQ(top_hashtags(c, {"w"}, 5), (std::vector<std::pair<std::string, std::size_t>>{{"maga", 1}}));
  EXPECT_TRUE(top_hashtags(c, {"nobody"}, 5).empty());
}

// HM: h1, h2. R+N: o1, o2. Account 9001 has handle TEN_GOP.
Corpus ira_corpus() {
  std::vector<Tweet> t = {tweet("1", "h1", "x", {"ten_gop"}),
                          tweet("2", "h1", "x", {"ten_gop", "pamela_moore13"}),
                          retweet("3", "h1", "9001"),
                          tweet("4", "h2", "x", {"someone"}),
                          tweet("5", "h2"),
                          tweet("6", "o1", "x", {"@Pamela_Moore13"}),
                          retweet("7", "o1", "pamela_moore13"),
                          tweet("8", "o2"),
                          tweet("9", "o2", "x", {"random"}),
                          tweet("10", "o2")};
  auto ira = user("9001");
  ira.handle = "TEN_GOP";
  return Corpus(std::move(t), {ira},
                {{"h1", Label::HM}, {"h2", Label::HM}, {"o1", Label::R}, {"o2", Label::N}});
}

TEST(IraEngagement, TenTweetFixture) {
  const auto c = ira_corpus();
  const auto rows = ira_engagement(c, group_labels(c.labels(), true), {"ten_gop", "pamela_moore13"});
  ASSERT_EQ(rows.size(), 2u);
  const auto& hm = rows[0];
  EXPECT_EQ(hm.group, "HM");
  EXPECT_EQ(hm.group_users, 2u);
  EXPECT_EQ(hm.group_tweets, 5u);
  EXPECT_EQ(hm.users_mentioning, 1u);
  EXPECT_EQ(hm.users_retweeting, 1u);
  EXPECT_EQ(hm.unique_ira_mentioned, 2u);
  EXPECT_EQ(hm.unique_ira_retweeted, 1u);
  EXPECT_EQ(hm.total_mentions, 3u);
  EXPECT_EQ(hm.total_retweets, 1u);
  EXPECT_DOUBLE_EQ(hm.users_mentioning_per_user(), 0.5);
  EXPECT_DOUBLE_EQ(hm.mentions_per_tweet(), 0.6);

  const auto& rn = rows[1];
  EXPECT_EQ(rn.group, "R+N");
  EXPECT_EQ(rn.group_tweets, 5u);
  EXPECT_EQ(rn.users_mentioning, 1u);
  EXPECT_EQ(rn.users_retweeting, 1u);
  EXPECT_EQ(rn.unique_ira_mentioned, 1u);
  EXPECT_EQ(rn.unique_ira_retweeted, 1u);
  EXPECT_EQ(rn.total_mentions, 1u);
  EXPECT_EQ(rn.total_retweets, 1u);
  EXPECT_DOUBLE_EQ(rn.retweets_per_tweet(), 0.2);

  for (const auto& e : rows) {
    EXPECT_LE(e.unique_ira_mentioned, 2u);
    EXPECT_LE(e.users_mentioning, e.group_users);
    EXPECT_GE(e.total_mentions, e.users_mentioning);
    EXPECT_GE(e.total_retweets, e.users_retweeting);
  }
}

TEST(IraEngagement, NoMatchesAllZero) {
  const auto c = ira_corpus();
  for (const auto& e : ira_engagement(c, group_labels(c.labels(), false), {"nobody_here"})) {
    EXPECT_EQ(e.users_mentioning + e.users_retweeting + e.total_mentions + e.total_retweets, 0u);
    EXPECT_EQ(e.unique_ira_mentioned + e.unique_ira_retweeted, 0u);
  }
  EXPECT_THROW(ira_engagement(c, group_labels(c.labels(), false), {}), ConfigError);
}

TEST(IraEngagement, HandleFile) {
  std::istringstream in("@TEN_GOP\n\n  pamela_moore13 \r\n");
  EXPECT_EQ(read_ira_handles(in), (std::set<std::string>{"pamela_moore13", "ten_gop"}));
}

}  // namespace
}  // namespace echonet
