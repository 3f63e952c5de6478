#pragma once

#include <algorithm>
#include <unordered_map>

#include "linkstream/graph.hpp"
#include "linkstream/partition.hpp"
#include "linkstream/types.hpp"

namespace lks {

enum class OverlapKind { temporal, node };

// Threads-as-vertices graph; the vertex set is every part id 0..k-1, isolated
// parts included.
struct OverlapGraph {
  OverlapKind kind{};
  StaticGraph graph;
};

struct SweepStats {
  std::size_t pushes = 0;
  std::size_t pops = 0;
  std::size_t emitted = 0;
};

namespace detail {

inline std::vector<NodeId> all_part_ids(std::size_t k) {
  std::vector<NodeId> ids(k);
  for (std::size_t i = 0; i < k; ++i) ids[i] = static_cast<NodeId>(i);
  return ids;
}

}  // namespace detail

// Edge (i,j) iff [a_i,w_i] and [a_j,w_j] intersect (closed intervals, so
// touching endpoints count). Endpoint sweep: parts enter in alpha order and
// leave the active set once their omega has passed, so the work is
// O(k log k + |E_X|) rather than O(k^2) interval tests. `stats` exposes the
// operation counts so that bound can be checked.
inline OverlapGraph temporal_overlap_graph(const StreamPartition& p, SweepStats* stats = nullptr) {
  std::size_t k = p.size();
  std::vector<std::uint32_t> order(k);
  for (std::uint32_t i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::pair{p.parts[a].alpha, a} < std::pair{p.parts[b].alpha, b};
  });

  auto by_omega = [&](std::uint32_t a, std::uint32_t b) {
    return p.parts[a].omega > p.parts[b].omega;  // min-heap on omega
  };
  std::vector<std::uint32_t> active;
  std::vector<StaticGraph::Edge> edges;
  SweepStats local;
  for (std::uint32_t i : order) {
    TimeStamp a = p.parts[i].alpha;
    while (!active.empty() && p.parts[active.front()].omega < a) {
      std::pop_heap(active.begin(), active.end(), by_omega);
      active.pop_back();
      ++local.pops;
    }
    for (std::uint32_t q : active) {
      edges.push_back({q, i, 1});
      ++local.emitted;
    }
    active.push_back(i);
    std::push_heap(active.begin(), active.end(), by_omega);
    ++local.pushes;
  }
  if (stats) *stats = local;
  return {OverlapKind::temporal, make_graph(detail::all_part_ids(k), std::move(edges))};
}

// Edge (i,j) iff V_i and V_j share a node. Built by inverting the node ->
// parts index and emitting a clique over each node's part list; duplicates
// are squeezed out incrementally so memory stays near the unique edge count.
// A node appearing in many parts makes the clique quadratic, so `max_edges`
// caps the deduplicated size with an explicit error.
inline OverlapGraph node_overlap_graph(const StreamPartition& p,
                                       std::size_t max_edges = std::size_t(1) << 27) {
  std::size_t k = p.size();
  std::unordered_map<NodeId, std::vector<std::uint32_t>> parts_of;
  for (std::uint32_t i = 0; i < k; ++i)
    for (NodeId v : p.parts[i].nodes) parts_of[v].push_back(i);

  std::vector<std::uint64_t> pairs;
  std::size_t deduped_floor = 0;
  auto squeeze = [&]() {
    std::sort(pairs.begin() + deduped_floor, pairs.end());
    std::inplace_merge(pairs.begin(), pairs.begin() + deduped_floor, pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    deduped_floor = pairs.size();
    if (pairs.size() > max_edges)
      throw Error("node overlap graph exceeds the edge cap of " + std::to_string(max_edges));
  };
  constexpr std::size_t kChunk = std::size_t(1) << 22;
  for (const auto& [v, parts] : parts_of) {
    for (std::size_t a = 0; a < parts.size(); ++a)
      for (std::size_t b = a + 1; b < parts.size(); ++b) {
        pairs.push_back(pair_key(parts[a], parts[b]));
        if (pairs.size() >= deduped_floor + kChunk) squeeze();
      }
  }
  squeeze();

  std::vector<StaticGraph::Edge> edges;
  edges.reserve(pairs.size());
  for (std::uint64_t key : pairs)
    edges.push_back({static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu), 1});
  return {OverlapKind::node, make_graph(detail::all_part_ids(k), std::move(edges))};
}

// Quotient graph of a community partition: one vertex per community, edge
// (i,j) iff some cross edge exists, weighted by the cross-edge count.
inline StaticGraph quotient_graph(const StaticGraph& g,
                                  std::span<const std::vector<NodeId>> communities) {
  std::unordered_map<NodeId, std::size_t> of;
  for (std::size_t i = 0; i < communities.size(); ++i)
    for (NodeId v : communities[i]) {
      if (!g.has_node(v))
        throw Error("community vertex " + std::to_string(v) + " is not in the graph");
      if (!of.emplace(v, i).second)
        throw Error("vertex " + std::to_string(v) + " appears in two communities");
    }
  if (of.size() != g.node_count()) throw Error("communities do not cover every vertex");
  std::vector<StaticGraph::Edge> edges;
  for (const auto& e : g.edges) {
    auto ci = static_cast<NodeId>(of.at(e.u));
    auto cj = static_cast<NodeId>(of.at(e.v));
    if (ci != cj) edges.push_back({ci, cj, e.weight});
  }
  return make_graph(detail::all_part_ids(communities.size()), std::move(edges));
}

// Which side(s) of a canonical quotient event did the bracketing: the
// lower-id part, the higher-id part, or both.
enum QuotientDirs : unsigned {
  kBracketLow = 1u,
  kBracketHigh = 2u,
};

struct QuotientEvent {
  TimeStamp t{};
  std::uint32_t i{};  // i < j
  std::uint32_t j{};
  std::uint32_t multiplicity{1};  // witness (node, event) pairs over both directions
  unsigned dirs{0};

  friend auto operator<=>(const QuotientEvent&, const QuotientEvent&) = default;
};

// Stream over part ids: event (t,i,j) when a node with a link in part j at t
// is, at that moment, inside its activity span in part i. Every part id is a
// node, so isolated threads are retained.
struct QuotientStream {
  TimeStamp alpha{0};
  TimeStamp omega{0};
  std::uint32_t part_count{0};
  std::vector<QuotientEvent> events;  // sorted by (t, i, j), unique triples

  // Multiplicities collapse to one event per triple; delta-density only sees
  // gap lengths, so this loses nothing.
  LinkStream as_link_stream() const {
    std::vector<LinkEvent> ev;
    ev.reserve(events.size());
    for (const auto& q : events) ev.push_back({q.t, q.i, q.j});
    return make_stream(alpha, omega, std::move(ev), detail::all_part_ids(part_count));
  }

  std::size_t connected_parts() const {
    std::vector<bool> seen(part_count, false);
    for (const auto& q : events) seen[q.i] = seen[q.j] = true;
    return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
  }
};

// Span scan per node: a part's span for node u is [first,last] over u's event
// times inside that part (a single event gives a point span, which still
// brackets a simultaneous link elsewhere). For each event (t,u,.) in part j,
// every other part of u whose span contains t yields an ordered witness
// (i,j,t); ordered witnesses merge into canonical undirected events.
inline QuotientStream quotient_stream(const StreamPartition& p) {
  const auto& events = p.stream().events;
  std::unordered_map<NodeId, std::vector<std::uint32_t>> events_of;  // per node, time order
  for (std::uint32_t e = 0; e < events.size(); ++e) {
    events_of[events[e].u].push_back(e);
    events_of[events[e].v].push_back(e);
  }

  struct Span {
    TimeStamp first, last;
    std::uint32_t part;
  };
  // (t, bracketing part i, event part j)
  std::vector<std::tuple<TimeStamp, std::uint32_t, std::uint32_t>> witnesses;
  std::vector<Span> spans;
  std::vector<Span> active;
  for (const auto& [node, list] : events_of) {
    std::unordered_map<std::uint32_t, std::pair<TimeStamp, TimeStamp>> range;
    for (std::uint32_t e : list) {
      auto [it, fresh] = range.try_emplace(p.part_of[e], events[e].t, events[e].t);
      if (!fresh) it->second.second = events[e].t;  // list ascends in time
    }
    spans.clear();
    for (const auto& [part, fl] : range) spans.push_back({fl.first, fl.second, part});
    std::sort(spans.begin(), spans.end(),
              [](const Span& a, const Span& b) { return a.first < b.first; });
    active.clear();
    std::size_t next = 0;
    for (std::uint32_t e : list) {
      TimeStamp t = events[e].t;
      std::uint32_t j = p.part_of[e];
      while (next < spans.size() && spans[next].first <= t) active.push_back(spans[next++]);
      std::size_t keep = 0;
      for (const Span& s : active) {
        if (s.last < t) continue;  // expired, drop from the active set
        active[keep++] = s;
        if (s.part != j) witnesses.emplace_back(t, s.part, j);
      }
      active.resize(keep);
    }
  }

  std::vector<QuotientEvent> out;
  out.reserve(witnesses.size());
  for (const auto& [t, i, j] : witnesses) {
    QuotientEvent q;
    q.t = t;
    q.i = std::min(i, j);
    q.j = std::max(i, j);
    q.dirs = (i < j) ? kBracketLow : kBracketHigh;
    out.push_back(q);
  }
  std::sort(out.begin(), out.end(), [](const QuotientEvent& a, const QuotientEvent& b) {
    return std::tie(a.t, a.i, a.j) < std::tie(b.t, b.i, b.j);
  });
  std::vector<QuotientEvent> merged;
  for (const auto& q : out) {
    if (!merged.empty() && merged.back().t == q.t && merged.back().i == q.i &&
        merged.back().j == q.j) {
      merged.back().multiplicity += 1;
      merged.back().dirs |= q.dirs;
    } else {
      merged.push_back(q);
    }
  }

  QuotientStream qs;
  qs.alpha = p.parent->alpha;
  qs.omega = p.parent->omega;
  qs.part_count = static_cast<std::uint32_t>(p.size());
  qs.events = std::move(merged);
  return qs;
}

// Degree per part id; `part_count` keeps isolated parts in the series.
inline std::vector<std::size_t> degree_series(const StaticGraph& g, std::size_t part_count) {
  std::vector<std::size_t> deg(part_count, 0);
  for (const auto& e : g.edges) {
    ++deg.at(e.u);
    ++deg.at(e.v);
  }
  return deg;
}

inline std::vector<std::size_t> degree_series(const OverlapGraph& g) {
  return degree_series(g.graph, g.graph.node_count());
}

}  // namespace lks
