#pragma once

#include <string>
#include <string_view>

#include "trendnet/graph.hpp"

namespace trendnet {

enum class GraphFormat { Dot, GraphML, Json };

GraphFormat parse_graph_format(std::string_view name);
std::string_view extension(GraphFormat f);

// Nodes in canonical order, edges sorted by (u, v), weights with 17
// significant digits.
//   dot:     undirected "graph" with a weight attribute per edge
//   graphml: GraphML with a declared double "weight" key on edges
//   json:    {"nodes": [...], "edges": [{"source", "target", "weight"}]}
std::string export_graph(const WeightedGraph& g, GraphFormat format);
std::string export_graph(const SpanningTree& t, GraphFormat format);

WeightedGraph graph_from_json(std::string_view text);
SpanningTree tree_from_json(std::string_view text);

}  // namespace trendnet
