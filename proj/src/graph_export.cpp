#include "echonet/graph_export.hpp"

namespace echonet {
namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

const NodeAttributes* find_attrs(const NodeAttributeMap& attrs, const std::string& id) {
  auto it = attrs.find(id);
  return it == attrs.end() ? nullptr : &it->second;
}

}  // namespace

void write_graphml(std::ostream& os, const EngagementGraph& g, const NodeAttributeMap& attrs) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
     << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
     << "  <key id=\"predicted\" for=\"node\" attr.name=\"predicted\" attr.type=\"string\"/>\n"
     << "  <key id=\"gscore\" for=\"node\" attr.name=\"generalized_score\" attr.type=\"int\"/>\n"
     << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
     << "  <graph id=\"" << to_string(g.semantics()) << "\" edgedefault=\"directed\">\n";
  for (const auto& id : g.nodes()) {
    os << "    <node id=\"" << xml_escape(id) << "\"";
    const auto* a = find_attrs(attrs, id);
    if (!a || (!a->label && !a->predicted && !a->generalized_score)) {
      os << "/>\n";
      continue;
    }
    os << ">\n";
    if (a->label) os << "      <data key=\"label\">" << xml_escape(*a->label) << "</data>\n";
    if (a->predicted) os << "      <data key=\"predicted\">" << xml_escape(*a->predicted) << "</data>\n";
    if (a->generalized_score) os << "      <data key=\"gscore\">" << *a->generalized_score << "</data>\n";
    os << "    </node>\n";
  }
  for (const auto& e : g.edges()) {
    os << "    <edge source=\"" << xml_escape(e.src) << "\" target=\"" << xml_escape(e.dst) << "\">\n"
       << "      <data key=\"weight\">" << e.weight << "</data>\n"
       << "    </edge>\n";
  }
  os << "  </graph>\n</graphml>\n";
}

void write_dot(std::ostream& os, const EngagementGraph& g, const NodeAttributeMap& attrs) {
  os << "digraph " << to_string(g.semantics()) << " {\n";
  for (const auto& id : g.nodes()) {
    os << "  " << dot_quote(id);
    if (const auto* a = find_attrs(attrs, id)) {
      std::string sep;
      os << " [";
      if (a->label) {
        os << "gold_label=" << dot_quote(*a->label);
        sep = ", ";
      }
      if (a->predicted) {
        os << sep << "predicted=" << dot_quote(*a->predicted);
        sep = ", ";
      }
      if (a->generalized_score) os << sep << "generalized_score=" << *a->generalized_score;
      os << "]";
    }
    os << ";\n";
  }
  for (const auto& e : g.edges())
    os << "  " << dot_quote(e.src) << " -> " << dot_quote(e.dst) << " [weight=" << e.weight << "];\n";
  os << "}\n";
}

}  // namespace echonet
