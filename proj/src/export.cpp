#include "trendnet/export.hpp"

#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "trendnet/error.hpp"
#include "trendnet/text.hpp"

namespace trendnet {

namespace {

std::string dot_id(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string to_dot(const WeightedGraph& g, std::string_view name) {
  std::string out = fmt::format("graph {} {{\n", name);
  for (const auto& n : g.nodes()) out += fmt::format("  {};\n", dot_id(n));
  for (const auto& e : g.edges())
    out += fmt::format("  {} -- {} [weight={}];\n", dot_id(g.nodes()[e.u]), dot_id(g.nodes()[e.v]),
                       format_real(e.weight));
  out += "}\n";
  return out;
}

std::string to_graphml(const WeightedGraph& g, std::string_view name) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
      "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
      "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
      "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
      "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
  out += fmt::format("  <graph id=\"{}\" edgedefault=\"undirected\">\n", name);
  for (const auto& n : g.nodes()) out += fmt::format("    <node id=\"{}\"/>\n", xml_escape(n));
  std::size_t k = 0;
  for (const auto& e : g.edges())
    out += fmt::format(
        "    <edge id=\"e{}\" source=\"{}\" target=\"{}\">\n"
        "      <data key=\"weight\">{}</data>\n"
        "    </edge>\n",
        k++, xml_escape(g.nodes()[e.u]), xml_escape(g.nodes()[e.v]), format_real(e.weight));
  out += "  </graph>\n</graphml>\n";
  return out;
}

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::string to_json(const WeightedGraph& g) {
  std::string out = "{\n  \"nodes\": [";
  for (std::size_t i = 0; i < g.nodes().size(); ++i)
    out += (i ? ", " : "") + json_string(g.nodes()[i]);
  out += "],\n  \"edges\": [";
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    const auto& e = g.edges()[k];
    out += fmt::format("{}\n    {{\"source\": {}, \"target\": {}, \"weight\": {}}}", k ? "," : "",
                       json_string(g.nodes()[e.u]), json_string(g.nodes()[e.v]),
                       format_real(e.weight));
  }
  out += g.edges().empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

std::string render(const WeightedGraph& g, GraphFormat format, std::string_view name) {
  switch (format) {
    case GraphFormat::Dot: return to_dot(g, name);
    case GraphFormat::GraphML: return to_graphml(g, name);
    case GraphFormat::Json: return to_json(g);
  }
  throw Error(ErrorKind::UnsupportedFormat, "unknown graph format");
}

std::pair<std::vector<std::string>, std::vector<Edge>> parse_json_graph(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    auto nodes = doc.at("nodes").get<std::vector<std::string>>();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      auto s = index.find(e.at("source").get<std::string>());
      auto t = index.find(e.at("target").get<std::string>());
      if (s == index.end() || t == index.end())
        throw Error(ErrorKind::ParseError, "edge references an unknown node");
      edges.push_back({s->second, t->second, e.at("weight").get<double>()});
    }
    return {std::move(nodes), std::move(edges)};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, fmt::format("graph JSON: {}", e.what()));
  }
}

}  // namespace

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "dot") return GraphFormat::Dot;
  if (name == "graphml") return GraphFormat::GraphML;
  if (name == "json") return GraphFormat::Json;
  throw Error(ErrorKind::UnsupportedFormat, fmt::format("'{}' (expected dot, graphml or json)", name));
}

std::string_view extension(GraphFormat f) {
  switch (f) {
    case GraphFormat::Dot: return "dot";
    case GraphFormat::GraphML: return "graphml";
    case GraphFormat::Json: return "json";
  }
  return "";
}

std::string export_graph(const WeightedGraph& g, GraphFormat format) {
  return render(g, format, "correlation");
}

std::string export_graph(const SpanningTree& t, GraphFormat format) {
  return render(t.as_graph(), format, "spanning_tree");
}

WeightedGraph graph_from_json(std::string_view text) {
  auto [nodes, edges] = parse_json_graph(text);
  return WeightedGraph(std::move(nodes), std::move(edges));
}

SpanningTree tree_from_json(std::string_view text) {
  auto [nodes, edges] = parse_json_graph(text);
  return SpanningTree(std::move(nodes), std::move(edges));
}

}  // namespace trendnet
