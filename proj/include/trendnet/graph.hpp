#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "trendnet/correlation.hpp"

namespace trendnet {

struct Edge {
  std::size_t u;  // u < v
  std::size_t v;
  double weight;

  bool operator==(const Edge&) const = default;
};

// Undirected weighted simple graph over labelled nodes. Edges are kept
// sorted by (u, v).
class WeightedGraph {
 public:
  WeightedGraph(std::vector<std::string> nodes, std::vector<Edge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool operator==(const WeightedGraph&) const = default;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
};

// Spanning tree over all nodes of a graph: exactly N-1 edges, acyclic and
// connected. The constructor checks all three.
class SpanningTree {
 public:
  SpanningTree(std::vector<std::string> nodes, std::vector<Edge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double total_weight() const { return total_weight_; }

  WeightedGraph as_graph() const { return WeightedGraph(nodes_, edges_); }

  bool operator==(const SpanningTree&) const = default;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  double total_weight_ = 0.0;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  // False when a and b were already in one set.
  bool unite(std::size_t a, std::size_t b);
  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
  std::size_t components_;
};

struct CentralityReport {
  std::vector<std::string> nodes;
  std::vector<int> degree;
  std::vector<double> normalized;  // degree / (N - 1)

  int degree_of(std::string_view geo) const;
};

struct BranchPartition {
  std::string hub;
  // Each branch lists its members in label order; branches are sorted by
  // size descending, then by smallest member.
  std::vector<std::vector<std::string>> branches;
};

// Complete graph, one edge per unordered pair, weight = rho.
WeightedGraph graph_from_matrix(const CorrelationMatrix& m);

// Kruskal on edges ordered by (weight desc, smaller label, larger label).
SpanningTree maximum_spanning_tree(const WeightedGraph& g);

CentralityReport degree_centrality(const SpanningTree& t);

// Hub = highest-degree node (ties to the smallest label); branches are the
// components left after deleting the hub.
BranchPartition extract_branches(const SpanningTree& t);

}  // namespace trendnet
