#include "echonet/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "echonet/error.hpp"
#include "echonet/meme_lexer.hpp"

namespace echonet {
namespace {

using nlohmann::json;

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Ids may arrive as JSON strings or integers.
std::optional<std::string> id_field(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw ParseError(line_no, std::string("field '") + key + "' must be a string or integer");
}

std::string required_id(const json& obj, const char* key, std::size_t line_no) {
  auto value = id_field(obj, key, line_no);
  if (!value) throw SchemaError(line_no, std::string("missing required field '") + key + "'");
  return *value;
}

std::vector<std::string> string_array(const json& obj, const char* key, std::size_t line_no,
                                      bool hashtag) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) throw ParseError(line_no, std::string("field '") + key + "' must be an array");
  for (const auto& item : *it) {
    std::string value;
    if (item.is_string()) {
      value = item.get<std::string>();
    } else if (item.is_number_integer()) {
      value = std::to_string(item.get<long long>());
    } else {
      throw ParseError(line_no, std::string("field '") + key + "' holds a non-string entry");
    }
    if (hashtag) {
      if (!value.empty() && value.front() == '#') value.erase(0, 1);
      value = lowercase(std::move(value));
    }
    if (std::find(out.begin(), out.end(), value) == out.end()) out.push_back(std::move(value));
  }
  return out;
}

json parse_object(std::string_view line, std::size_t line_no) {
  json obj = json::parse(line.begin(), line.end(), nullptr, false);
  if (obj.is_discarded()) throw ParseError(line_no, "malformed JSON");
  if (!obj.is_object()) throw ParseError(line_no, "record is not a JSON object");
  return obj;
}

Timestamp timestamp_field(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null())
    throw SchemaError(line_no, std::string("missing required field '") + key + "'");
  if (!it->is_string()) throw ParseError(line_no, std::string("field '") + key + "' must be a string");
  try {
    return parse_rfc3339(it->get<std::string>());
  } catch (const DataError& e) {
    throw ParseError(line_no, e.what());
  }
}

long long count_field(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return 0;
  if (!it->is_number_integer() || it->get<long long>() < 0)
    throw ParseError(line_no, std::string("field '") + key + "' must be a non-negative integer");
  return it->get<long long>();
}

template <typename T, typename Parse>
LoadResult<T> read_lines(std::istream& in, Parse parse) {
  LoadResult<T> result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      result.records.push_back(parse(line, line_no));
    } catch (const ParseError& e) {
      result.errors.push_back({e.line(), e.code(), e.what()});
    }
  }
  return result;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string_view to_string(Label label) {
  switch (label) {
    case Label::HM: return "HM";
    case Label::R: return "R";
    case Label::N: return "N";
  }
  return "?";
}

Label parse_label(std::string_view text) {
  if (text == "HM") return Label::HM;
  if (text == "R") return Label::R;
  if (text == "N") return Label::N;
  throw DataError("unknown label '" + std::string(text) + "'");
}

Tweet parse_tweet_record(std::string_view line, std::size_t line_no) {
  const json obj = parse_object(line, line_no);
  Tweet t;
  t.tweet_id = required_id(obj, "id", line_no);
  t.author_id = required_id(obj, "author", line_no);
  auto text = obj.find("text");
  if (text == obj.end() || text->is_null()) throw SchemaError(line_no, "missing required field 'text'");
  if (!text->is_string()) throw ParseError(line_no, "field 'text' must be a string");
  t.text = text->get<std::string>();
  t.created_at = timestamp_field(obj, "ts", line_no);
  t.mentions = string_array(obj, "mentions", line_no, false);
  t.hashtags = string_array(obj, "hashtags", line_no, true);
  t.urls = static_cast<int>(count_field(obj, "urls", line_no));
  t.in_reply_to_user = id_field(obj, "reply_to", line_no);
  t.retweet_of_user = id_field(obj, "retweet_of", line_no);
  if (auto lang = obj.find("lang"); lang != obj.end() && lang->is_string())
    t.language = lowercase(lang->get<std::string>());
  return t;
}

UserRecord parse_user_record(std::string_view line, std::size_t line_no) {
  const json obj = parse_object(line, line_no);
  UserRecord u;
  u.user_id = required_id(obj, "id", line_no);
  u.handle = id_field(obj, "handle", line_no).value_or(u.user_id);
  u.created_at = timestamp_field(obj, "created_at", line_no);
  u.friends_count = count_field(obj, "friends", line_no);
  u.followers_count = count_field(obj, "followers", line_no);
  if (auto s = obj.find("suspended"); s != obj.end() && s->is_boolean()) u.suspended = s->get<bool>();
  return u;
}

std::string to_jsonl(const Tweet& t) {
  json obj = {{"id", t.tweet_id},   {"author", t.author_id},
              {"text", t.text},     {"ts", format_rfc3339(t.created_at)},
              {"mentions", t.mentions}, {"hashtags", t.hashtags},
              {"urls", t.urls},     {"reply_to", nullptr},
              {"retweet_of", nullptr}, {"lang", t.language}};
  if (t.in_reply_to_user) obj["reply_to"] = *t.in_reply_to_user;
  if (t.retweet_of_user) obj["retweet_of"] = *t.retweet_of_user;
  return obj.dump();
}

LoadResult<Tweet> read_tweets(std::istream& in) {
  return read_lines<Tweet>(in, [](const std::string& l, std::size_t n) { return parse_tweet_record(l, n); });
}

LoadResult<UserRecord> read_users(std::istream& in) {
  return read_lines<UserRecord>(in, [](const std::string& l, std::size_t n) { return parse_user_record(l, n); });
}

LoadResult<Tweet> load_tweets(const std::string& path) {
  auto in = open_or_throw(path);
  return read_tweets(in);
}

LoadResult<UserRecord> load_users(const std::string& path) {
  auto in = open_or_throw(path);
  return read_users(in);
}

std::map<std::string, Label> read_labels(std::istream& in) {
  std::map<std::string, Label> labels;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "user_id,label") throw ParseError(line_no, "expected header 'user_id,label'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(line_no, "expected 'user_id,label'");
    const std::string user = line.substr(0, comma);
    try {
      labels[user] = parse_label(line.substr(comma + 1));
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return labels;
}

std::map<std::string, Label> load_labels(const std::string& path) {
  auto in = open_or_throw(path);
  return read_labels(in);
}

Corpus::Corpus(std::vector<Tweet> tweets, std::vector<UserRecord> users,
               std::map<std::string, Label> labels)
    : tweets_(std::move(tweets)), users_(std::move(users)), labels_(std::move(labels)) {
  for (std::size_t i = 0; i < tweets_.size(); ++i) {
    if (!by_id_.emplace(tweets_[i].tweet_id, i).second)
      throw DataError("duplicate tweet id '" + tweets_[i].tweet_id + "'");
    by_author_[tweets_[i].author_id].push_back(i);
  }
  for (auto& [author, idx] : by_author_) {
    authors_.push_back(author);
    std::sort(idx.begin(), idx.end(), [this](std::size_t a, std::size_t b) {
      const Tweet& x = tweets_[a];
      const Tweet& y = tweets_[b];
      if (x.created_at != y.created_at) return x.created_at < y.created_at;
      return x.tweet_id < y.tweet_id;
    });
  }
  for (std::size_t i = 0; i < users_.size(); ++i) {
    if (!user_index_.emplace(users_[i].user_id, i).second)
      throw DataError("duplicate user id '" + users_[i].user_id + "'");
    if (auto it = labels_.find(users_[i].user_id); it != labels_.end()) users_[i].label = it->second;
  }
}

std::vector<std::string> Corpus::all_users() const {
  std::set<std::string> ids(authors_.begin(), authors_.end());
  for (const auto& u : users_) ids.insert(u.user_id);
  return {ids.begin(), ids.end()};
}

std::vector<const Tweet*> Corpus::timeline(std::string_view user_id) const {
  std::vector<const Tweet*> out;
  auto it = by_author_.find(user_id);
  if (it == by_author_.end()) return out;
  out.reserve(it->second.size());
  for (auto i : it->second) out.push_back(&tweets_[i]);
  return out;
}

const Tweet* Corpus::find_tweet(std::string_view tweet_id) const {
  auto it = by_id_.find(std::string(tweet_id));
  return it == by_id_.end() ? nullptr : &tweets_[it->second];
}

const UserRecord* Corpus::user(std::string_view user_id) const {
  auto it = user_index_.find(user_id);
  return it == user_index_.end() ? nullptr : &users_[it->second];
}

std::optional<Label> Corpus::label(std::string_view user_id) const {
  auto it = labels_.find(std::string(user_id));
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

Corpus Corpus::truncate_timelines(std::size_t max_per_user) const {
  std::vector<Tweet> kept;
  for (const auto& [author, idx] : by_author_) {
    const std::size_t skip = idx.size() > max_per_user ? idx.size() - max_per_user : 0;
    for (std::size_t k = skip; k < idx.size(); ++k) kept.push_back(tweets_[idx[k]]);
  }
  return Corpus(std::move(kept), users_, labels_);
}

Corpus extract_echo_tweets(const Corpus& corpus) {
  return corpus.filter([](const Tweet& t) { return contains_echo(t.text); });
}

std::set<std::string> filter_echo_users(const Corpus& corpus, const CorpusFilterConfig& cfg) {
  if (cfg.min_echo_uses < 1) throw ConfigError("min_echo_uses must be >= 1");
  std::map<std::string, int> counts;
  for (const auto& t : corpus.tweets()) {
    if (t.language == cfg.language && contains_echo(t.text)) ++counts[t.author_id];
  }
  std::set<std::string> kept;
  for (const auto& [user, n] : counts)
    if (n >= cfg.min_echo_uses) kept.insert(user);
  return kept;
}

AccountStats account_stats(const UserRecord& user, std::span<const Tweet* const> timeline,
                           Timestamp as_of) {
  AccountStats s;
  s.days_active = std::max(0.0, days_between(user.created_at, as_of));
  if (timeline.empty()) return s;
  std::size_t replies = 0, retweets = 0, with_url = 0, with_tag = 0;
  for (const Tweet* t : timeline) {
    replies += t->is_reply();
    retweets += t->is_retweet();
    with_url += t->urls > 0;
    with_tag += !t->hashtags.empty();
  }
  const double n = static_cast<double>(timeline.size());
  s.tweets_per_day = n / std::max(s.days_active, 1.0);
  s.pct_replies = replies / n;
  s.pct_retweets = retweets / n;
  s.pct_url = with_url / n;
  s.pct_hashtags = with_tag / n;
  return s;
}

AccountStats account_stats(const UserRecord& user, std::span<const Tweet> timeline, Timestamp as_of) {
  std::vector<const Tweet*> ptrs;
  ptrs.reserve(timeline.size());
  for (const auto& t : timeline) ptrs.push_back(&t);
  return account_stats(user, ptrs, as_of);
}

}  // namespace echonet
