#pragma once

#include <algorithm>
#include <unordered_map>

#include "linkstream/density.hpp"
#include "linkstream/relations.hpp"

namespace lks {

// Independent brute-force reference implementations. These deliberately use
// different algorithms from the production code (interval-union measure
// instead of gap clipping, literal triple enumeration instead of span scans)
// so agreement in tests is evidence rather than tautology.

// Probability that a window of length delta, started uniformly in
// [alpha, omega - delta], contains an event of a uniformly chosen pair.
// Per pair: the union measure of the intervals [t - delta, t] clipped to
// [alpha, omega - delta], averaged over all pairs.
inline DensityValue delta_density_oracle(const LinkStream& s, Delta d) {
  if (d.seconds < 0) throw Error("delta must be non-negative");
  if (d.seconds >= s.duration()) throw Error("oracle requires delta < duration");
  if (s.nodes.size() < 2) return DensityValue::degenerate("fewer than 2 nodes");

  std::unordered_map<std::uint64_t, std::vector<TimeStamp>> by_pair;
  for (const auto& e : s.events) by_pair[pair_key(e.u, e.v)].push_back(e.t);

  TimeStamp lo = s.alpha;
  TimeStamp hi = s.omega - d.seconds;
  int128 covered = 0;
  for (const auto& [key, times] : by_pair) {
    // times ascend, so the clipped intervals ascend by start as well.
    TimeStamp cur_start = 0, cur_end = 0;
    bool open = false;
    for (TimeStamp t : times) {
      TimeStamp a = std::max(lo, t - d.seconds);
      TimeStamp b = std::min(hi, t);
      if (a > b) continue;
      if (!open) {
        cur_start = a;
        cur_end = b;
        open = true;
      } else if (a > cur_end) {
        covered += cur_end - cur_start;
        cur_start = a;
        cur_end = b;
      } else {
        cur_end = std::max(cur_end, b);
      }
    }
    if (open) covered += cur_end - cur_start;
  }
  int128 n = static_cast<int128>(s.nodes.size());
  int128 all_pairs = n * (n - 1) / 2;
  int128 den = all_pairs * static_cast<int128>(hi - lo);
  return DensityValue::from_ratio(covered, den);
}

// Literal reading of the quotient-stream definition: for each ordered part
// pair (i, j), each event e in E_j and each of its endpoints u, search E_i
// for two links of u (possibly the same one) whose times bracket t(e).
inline QuotientStream quotient_stream_oracle(const StreamPartition& p) {
  const auto& events = p.stream().events;
  std::vector<std::tuple<TimeStamp, std::uint32_t, std::uint32_t>> witnesses;
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    for (std::uint32_t j = 0; j < p.size(); ++j) {
      if (i == j) continue;
      for (auto ej : p.parts[j].events) {
        const auto& e = events[ej];
        for (NodeId u : {e.u, e.v}) {
          bool found = false;
          for (auto e1 : p.parts[i].events) {
            if (events[e1].u != u && events[e1].v != u) continue;
            for (auto e2 : p.parts[i].events) {
              if (events[e2].u != u && events[e2].v != u) continue;
              if (events[e1].t <= e.t && e.t <= events[e2].t) {
                found = true;
                break;
              }
            }
            if (found) break;
          }
          if (found) witnesses.emplace_back(e.t, i, j);
        }
      }
    }
  }

  std::vector<QuotientEvent> out;
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

// O(k^2) pairwise interval tests.
inline OverlapGraph temporal_overlap_oracle(const StreamPartition& p) {
  std::vector<StaticGraph::Edge> edges;
  for (std::uint32_t i = 0; i < p.size(); ++i)
    for (std::uint32_t j = i + 1; j < p.size(); ++j)
      if (p.parts[i].alpha <= p.parts[j].omega && p.parts[j].alpha <= p.parts[i].omega)
        edges.push_back({i, j, 1});
  return {OverlapKind::temporal, make_graph(detail::all_part_ids(p.size()), std::move(edges))};
}

// O(k^2) pairwise node-set intersections.
inline OverlapGraph node_overlap_oracle(const StreamPartition& p) {
  std::vector<StaticGraph::Edge> edges;
  for (std::uint32_t i = 0; i < p.size(); ++i)
    for (std::uint32_t j = i + 1; j < p.size(); ++j) {
      const auto& a = p.parts[i].nodes;
      const auto& b = p.parts[j].nodes;
      bool share = false;
      for (NodeId v : a)
        if (std::binary_search(b.begin(), b.end(), v)) {
          share = true;
          break;
        }
      if (share) edges.push_back({i, j, 1});
    }
  return {OverlapKind::node, make_graph(detail::all_part_ids(p.size()), std::move(edges))};
}

// Full scan of the parent events with the three defining conditions checked
// one event at a time.
inline LinkStream inter_thread_substream_oracle(const StreamPartition& p, std::size_t i,
                                                std::size_t j) {
  if (i == j) throw Error("inter-thread substream requires two distinct parts");
  const auto& pi = p.parts.at(i);
  const auto& pj = p.parts.at(j);
  TimeStamp lo = std::min(pi.alpha, pj.alpha);
  TimeStamp hi = std::max(pi.omega, pj.omega);
  std::vector<NodeId> nodes;
  std::set_union(pi.nodes.begin(), pi.nodes.end(), pj.nodes.begin(), pj.nodes.end(),
                 std::back_inserter(nodes));
  std::vector<LinkEvent> kept;
  const auto& events = p.stream().events;
  for (std::uint32_t e = 0; e < events.size(); ++e) {
    if (events[e].t < lo || events[e].t > hi) continue;
    if (p.part_of[e] == i || p.part_of[e] == j) continue;
    if (!std::binary_search(nodes.begin(), nodes.end(), events[e].u)) continue;
    if (!std::binary_search(nodes.begin(), nodes.end(), events[e].v)) continue;
    kept.push_back(events[e]);
  }
  return make_stream(lo, hi, std::move(kept), std::move(nodes), p.stream().labels);
}

}  // namespace lks
