#include "echonet/meme_lexer.hpp"

#include <cctype>

namespace echonet {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_paren(char c) { return c == '(' || c == ')'; }

// A maximal run of one parenthesis character, or a maximal run of
// non-parenthesis content.
struct Run {
  std::size_t begin;
  std::size_t end;
  char kind;  // '(' , ')' or 0 for content
  std::size_t size() const { return end - begin; }
};

std::vector<Run> split_runs(std::string_view text) {
  std::vector<Run> runs;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    std::size_t j = i + 1;
    if (is_paren(c)) {
      while (j < text.size() && text[j] == c) ++j;
      runs.push_back({i, j, c});
    } else {
      while (j < text.size() && !is_paren(text[j])) ++j;
      runs.push_back({i, j, 0});
    }
    i = j;
  }
  return runs;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::string_view to_string(EchoVariant v) {
  switch (v) {
    case EchoVariant::Standard: return "standard";
    case EchoVariant::Lengthened: return "lengthened";
    case EchoVariant::Reversed: return "reversed";
  }
  return "unknown";
}

std::vector<EchoSpan> scan_echoes(std::string_view text) {
  std::vector<EchoSpan> spans;
  const auto runs = split_runs(text);
  std::size_t i = 0;
  while (i + 2 < runs.size()) {
    const Run& open = runs[i];
    const Run& content = runs[i + 1];
    const Run& close = runs[i + 2];
    const bool forward = open.kind == '(' && close.kind == ')';
    const bool reversed = open.kind == ')' && close.kind == '(';
    if ((forward || reversed) && content.kind == 0 && open.size() >= kMinEchoDepth &&
        close.size() >= kMinEchoDepth) {
      const std::string_view raw = text.substr(content.begin, content.size());
      const std::string_view inner = trim(raw);
      const bool same_line = raw.find('\n') == std::string_view::npos;
      if (!inner.empty() && (forward || same_line)) {
        EchoSpan span;
        span.start = open.begin;
        span.end = close.end;
        span.open_len = open.size();
        span.close_len = close.size();
        span.inner_start = content.begin;
        span.inner_end = content.end;
        span.inner = std::string(inner);
        if (reversed) {
          span.variant = EchoVariant::Reversed;
        } else if (open.size() == kMinEchoDepth && close.size() == kMinEchoDepth) {
          span.variant = EchoVariant::Standard;
        } else {
          span.variant = EchoVariant::Lengthened;
        }
        spans.push_back(std::move(span));
        i += 3;
        continue;
      }
    }
    ++i;
  }
  return spans;
}

std::string normalize_term(std::string_view inner) {
  std::string collapsed;
  collapsed.reserve(inner.size());
  bool pending_space = false;
  for (char c : inner) {
    if (is_space(c)) {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) collapsed.push_back(' ');
    pending_space = false;
    collapsed.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  auto punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
  std::size_t b = 0, e = collapsed.size();
  while (b < e && (punct(collapsed[b]) || collapsed[b] == ' ')) ++b;
  while (e > b && (punct(collapsed[e - 1]) || collapsed[e - 1] == ' ')) --e;
  return collapsed.substr(b, e - b);
}

std::string normalize_term(const EchoSpan& span) { return normalize_term(span.inner); }

}  // namespace echonet
