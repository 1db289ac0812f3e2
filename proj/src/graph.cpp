#include "trendnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "trendnet/error.hpp"

namespace trendnet {

namespace {

bool edge_less(const Edge& a, const Edge& b) {
  return a.u != b.u ? a.u < b.u : a.v < b.v;
}

// Checks ranges, orients every edge u < v and sorts by (u, v).
std::vector<Edge> canonical_edges(std::size_t n, std::vector<Edge> edges, ErrorKind kind) {
  for (auto& e : edges) {
    if (e.u == e.v) throw Error(kind, fmt::format("self-loop at node {}", e.u));
    if (e.u >= n || e.v >= n) throw Error(kind, "edge endpoint out of range");
    if (!std::isfinite(e.weight)) throw Error(kind, "non-finite edge weight");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), edge_less);
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
      throw Error(kind, fmt::format("duplicate edge ({}, {})", edges[i].u, edges[i].v));
  return edges;
}

void check_nodes(const std::vector<std::string>& nodes, ErrorKind kind) {
  auto sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(kind, "duplicate node label");
}

}  // namespace

WeightedGraph::WeightedGraph(std::vector<std::string> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)) {
  check_nodes(nodes_, ErrorKind::InvalidMatrix);
  edges_ = canonical_edges(nodes_.size(), std::move(edges), ErrorKind::InvalidMatrix);
}

SpanningTree::SpanningTree(std::vector<std::string> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)) {
  check_nodes(nodes_, ErrorKind::InvalidTree);
  edges_ = canonical_edges(nodes_.size(), std::move(edges), ErrorKind::InvalidTree);
  if (nodes_.empty() || edges_.size() != nodes_.size() - 1)
    throw Error(ErrorKind::InvalidTree,
                fmt::format("{} edges for {} nodes", edges_.size(), nodes_.size()));
  UnionFind uf(nodes_.size());
  for (const auto& e : edges_) {
    if (!uf.unite(e.u, e.v))
      throw Error(ErrorKind::InvalidTree,
                  fmt::format("cycle through {}-{}", nodes_[e.u], nodes_[e.v]));
    total_weight_ += e.weight;
  }
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --components_;
  return true;
}

int CentralityReport::degree_of(std::string_view geo) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == geo) return degree[i];
  throw Error(ErrorKind::LabelMismatch, fmt::format("no node {}", geo));
}

WeightedGraph graph_from_matrix(const CorrelationMatrix& m) {
  m.validate();
  const std::size_t n = m.size();
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, m(i, j)});
  return WeightedGraph(m.labels(), std::move(edges));
}

SpanningTree maximum_spanning_tree(const WeightedGraph& g) {
  const auto& labels = g.nodes();
  if (labels.size() < 2)
    throw Error(ErrorKind::InsufficientData, "spanning tree needs at least 2 nodes");

  // Sort key is total over distinct node pairs, so the result does not
  // depend on the order edges were presented in.
  std::vector<Edge> order = g.edges();
  auto key_less = [&](const Edge& a, const Edge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    const auto& a_lo = std::min(labels[a.u], labels[a.v]);
    const auto& b_lo = std::min(labels[b.u], labels[b.v]);
    if (a_lo != b_lo) return a_lo < b_lo;
    return std::max(labels[a.u], labels[a.v]) < std::max(labels[b.u], labels[b.v]);
  };
  std::sort(order.begin(), order.end(), key_less);

  UnionFind uf(labels.size());
  std::vector<Edge> chosen;
  chosen.reserve(labels.size() - 1);
  for (const auto& e : order) {
    if (uf.unite(e.u, e.v)) {
      chosen.push_back(e);
      if (chosen.size() == labels.size() - 1) break;
    }
  }
  if (chosen.size() != labels.size() - 1)
    throw Error(ErrorKind::Disconnected,
                fmt::format("graph has {} components", uf.components()));
  return SpanningTree(labels, std::move(chosen));
}

CentralityReport degree_centrality(const SpanningTree& t) {
  const std::size_t n = t.node_count();
  CentralityReport r{t.nodes(), std::vector<int>(n, 0), std::vector<double>(n, 0.0)};
  for (const auto& e : t.edges()) {
    ++r.degree[e.u];
    ++r.degree[e.v];
  }
  if (n > 1)
    for (std::size_t i = 0; i < n; ++i)
      r.normalized[i] = static_cast<double>(r.degree[i]) / static_cast<double>(n - 1);
  return r;
}

BranchPartition extract_branches(const SpanningTree& t) {
  const std::size_t n = t.node_count();
  if (n < 2) throw Error(ErrorKind::InsufficientData, "branches need at least 2 nodes");
  const auto& labels = t.nodes();
  const auto c = degree_centrality(t);

  std::size_t hub = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (c.degree[i] > c.degree[hub] || (c.degree[i] == c.degree[hub] && labels[i] < labels[hub]))
      hub = i;

  UnionFind uf(n);
  for (const auto& e : t.edges())
    if (e.u != hub && e.v != hub) uf.unite(e.u, e.v);

  std::vector<std::vector<std::string>> groups(n);
  for (std::size_t i = 0; i < n; ++i)
    if (i != hub) groups[uf.find(i)].push_back(labels[i]);

  BranchPartition out{labels[hub], {}};
  for (auto& g : groups) {
    if (g.empty()) continue;
    std::sort(g.begin(), g.end());
    out.branches.push_back(std::move(g));
  }
  std::sort(out.branches.begin(), out.branches.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

}  // namespace trendnet
