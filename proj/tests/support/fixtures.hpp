#pragma once

#include <string>
#include <vector>

#include "echonet/corpus.hpp"
#include "echonet/timestamp.hpp"

namespace echonet::testing {

inline Tweet tweet(std::string id, std::string author, std::string text = "text",
                   std::vector<std::string> mentions = {}, std::string ts = "2017-01-01T00:00:00Z") {
  Tweet t;
  t.tweet_id = std::move(id);
  t.author_id = std::move(author);
  t.text = std::move(text);
  t.mentions = std::move(mentions);
  t.created_at = parse_rfc3339(ts);
  t.language = "en";
  return t;
}

inline UserRecord user(std::string id, std::string created = "2016-01-01T00:00:00Z", long long friends = 0,
                       long long followers = 0) {
  UserRecord u;
  u.user_id = id;
  u.handle = "h_" + id;
  u.created_at = parse_rfc3339(created);
  u.friends_count = friends;
  u.followers_count = followers;
  return u;
}

}  // namespace echonet::testing
