#pragma once

#include <string>

#include "echonet/graph.hpp"

namespace echonet::testing {

struct SuiteResult {
  std::string failure;    // empty when everything matched
  double max_real_error = 0.0;
};

// Compares network_stats, both component partitions and all seven
// centralities of `g` against the dense brute-force oracles: integer
// quantities exactly, real ones within `tolerance`.
SuiteResult compare_with_oracles(const EngagementGraph& g, double tolerance, bool weighted = false);

}  // namespace echonet::testing
