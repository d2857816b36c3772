#include "echonet/hashing.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <string>

namespace echonet {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SparseRow hashed_char_ngrams(std::string_view text, const NgramHashConfig& cfg) {
  if (text.empty()) return {};
  std::string padded = " ";
  for (unsigned char c : text) padded.push_back(static_cast<char>(std::tolower(c)));
  padded.push_back(' ');
  std::map<std::uint32_t, double> acc;
  for (std::size_t n = cfg.min_n; n <= cfg.max_n; ++n) {
    if (padded.size() < n) break;
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
      const std::uint64_t h = fnv1a64(std::string_view(padded).substr(i, n));
      const auto bucket = static_cast<std::uint32_t>((h & 0xffffffffULL) % cfg.buckets);
      const double sign = (h >> 63) ? -1.0 : 1.0;
      acc[bucket] += sign;
    }
  }
  double norm = 0.0;
  for (const auto& [b, v] : acc) norm += v * v;
  SparseRow row;
  if (norm == 0.0) return row;
  norm = std::sqrt(norm);
  for (const auto& [b, v] : acc)
    if (v != 0.0) row.emplace_back(b, v / norm);
  return row;
}

}  // namespace echonet
