#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace echonet {

using Timestamp = std::chrono::sys_seconds;

// Parses an RFC 3339 timestamp ("2016-05-01T00:00:00Z",
// "2016-05-01T02:00:00.123+02:00"). Fractional seconds are truncated.
// Throws DataError on malformed input.
Timestamp parse_rfc3339(std::string_view text);

std::string format_rfc3339(Timestamp ts);

inline double days_between(Timestamp from, Timestamp to) {
  return std::chrono::duration<double>(to - from).count() / 86400.0;
}

}  // namespace echonet
