#pragma once

#include <algorithm>
#include <span>

#include "linkstream/stream.hpp"
#include "linkstream/types.hpp"

namespace lks {

// Undirected graph without self-loops; vertices may be stream node ids or
// partition part ids. Edge weights count event (or cross-link) multiplicity.
struct StaticGraph {
  struct Edge {
    NodeId u{};
    NodeId v{};
    std::uint64_t weight{1};

    friend auto operator<=>(const Edge&, const Edge&) = default;
  };

  std::vector<NodeId> nodes;  // sorted, unique
  std::vector<Edge> edges;    // u < v, sorted by (u, v), unique pairs

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }

  bool has_node(NodeId n) const {
    return std::binary_search(nodes.begin(), nodes.end(), n);
  }

  const Edge* find_edge(NodeId u, NodeId v) const {
    if (v < u) std::swap(u, v);
    auto it = std::lower_bound(edges.begin(), edges.end(), Edge{u, v, 0},
                               [](const Edge& a, const Edge& b) {
                                 return std::pair{a.u, a.v} < std::pair{b.u, b.v};
                               });
    if (it == edges.end() || it->u != u || it->v != v) return nullptr;
    return &*it;
  }

  bool has_edge(NodeId u, NodeId v) const { return find_edge(u, v) != nullptr; }
};

// Canonicalizes pair order, merges duplicate pairs by summing weights, and
// adds edge endpoints to the vertex set.
inline StaticGraph make_graph(std::vector<NodeId> nodes, std::vector<StaticGraph::Edge> edges) {
  StaticGraph g;
  for (auto& e : edges) {
    if (e.u == e.v) throw Error("self-loop on vertex " + std::to_string(e.u));
    if (e.v < e.u) std::swap(e.u, e.v);
    nodes.push_back(e.u);
    nodes.push_back(e.v);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::sort(edges.begin(), edges.end());
  std::vector<StaticGraph::Edge> merged;
  for (const auto& e : edges) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
      merged.back().weight += e.weight;
    else
      merged.push_back(e);
  }
  g.nodes = std::move(nodes);
  g.edges = std::move(merged);
  return g;
}

// G(L): vertices are the nodes that occur in at least one event, an edge per
// pair that interacts at least once, weighted by the number of events.
inline StaticGraph induced_graph(const LinkStream& stream) {
  std::vector<StaticGraph::Edge> edges;
  edges.reserve(stream.events.size());
  for (const auto& e : stream.events) edges.push_back({e.u, e.v, 1});
  return make_graph({}, std::move(edges));
}

}  // namespace lks
