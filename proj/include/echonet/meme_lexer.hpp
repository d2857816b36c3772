#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace echonet {

enum class EchoVariant { Standard, Lengthened, Reversed };

std::string_view to_string(EchoVariant v);

// One occurrence of the echo meme. Offsets are byte offsets into the
// scanned text; [start, end) covers both parenthesis runs.
//
// For Standard/Lengthened spans `open_len` counts the leading '(' run and
// `close_len` the trailing ')' run. For Reversed spans `open_len` counts the
// leading ')' run and `close_len` the trailing '(' run.
struct EchoSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t open_len = 0;
  std::size_t close_len = 0;
  std::size_t inner_start = 0;  // raw (untrimmed) inner content
  std::size_t inner_end = 0;
  std::string inner;            // trimmed
  EchoVariant variant = EchoVariant::Standard;

  bool operator==(const EchoSpan&) const = default;
};

inline constexpr std::size_t kMinEchoDepth = 3;

// Leftmost-longest scan for echo spans. Never throws.
std::vector<EchoSpan> scan_echoes(std::string_view text);

inline bool contains_echo(std::string_view text) { return !scan_echoes(text).empty(); }

// Lowercase, collapse internal whitespace, strip surrounding punctuation.
std::string normalize_term(const EchoSpan& span);
std::string normalize_term(std::string_view inner);

}  // namespace echonet
