#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "echonet/graph.hpp"

namespace echonet {

// Optional per-node attributes carried into exported graphs.
struct NodeAttributes {
  std::optional<std::string> label;
  std::optional<std::string> predicted;
  std::optional<int> generalized_score;
};

using NodeAttributeMap = std::map<std::string, NodeAttributes>;

void write_graphml(std::ostream& os, const EngagementGraph& g, const NodeAttributeMap& attrs = {});
void write_dot(std::ostream& os, const EngagementGraph& g, const NodeAttributeMap& attrs = {});

}  // namespace echonet
