#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace echonet {

std::uint64_t fnv1a64(std::string_view bytes);

// Sparse row: (bucket, value) pairs sorted by bucket, no duplicate buckets.
using SparseRow = std::vector<std::pair<std::uint32_t, double>>;

struct NgramHashConfig {
  std::size_t min_n = 3;
  std::size_t max_n = 5;
  std::uint32_t buckets = 1u << 18;
};

// Signed hashing of lowercased character n-grams (over bytes, with the text
// padded by one space on each side), L2-normalized. Empty text yields an
// empty row.
SparseRow hashed_char_ngrams(std::string_view text, const NgramHashConfig& cfg = {});

}  // namespace echonet
