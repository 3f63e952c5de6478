#pragma once

#include <algorithm>
#include <memory>
#include <span>
#include <utility>

#include "linkstream/types.hpp"

namespace lks {

// A link stream L = (T, V, E): a closed time interval [alpha, omega], a node
// set, and a time-ordered multiset of undirected link events. Immutable after
// construction; queries are read-only and safe to share across threads.
struct LinkStream {
  TimeStamp alpha{0};
  TimeStamp omega{0};
  std::vector<NodeId> nodes;        // sorted, unique; may contain isolated nodes
  std::vector<LinkEvent> events;    // sorted by (t, u, v); duplicates allowed
  std::shared_ptr<const NodeTable> labels;  // null for streams over synthetic ids

  TimeStamp duration() const { return omega - alpha; }

  bool has_node(NodeId n) const {
    return std::binary_search(nodes.begin(), nodes.end(), n);
  }
};

struct StreamDiagnostics {
  std::size_t self_links_dropped = 0;
};

// Validates interval and event ranges, canonicalizes pair order, sorts.
// `extra_nodes` lets callers keep isolated nodes in V.
inline LinkStream make_stream(TimeStamp alpha, TimeStamp omega,
                              std::vector<LinkEvent> events,
                              std::vector<NodeId> extra_nodes = {},
                              std::shared_ptr<const NodeTable> labels = nullptr) {
  if (alpha > omega) throw Error("stream interval has alpha > omega");
  LinkStream s;
  s.alpha = alpha;
  s.omega = omega;
  s.labels = std::move(labels);
  s.nodes = std::move(extra_nodes);
  for (auto& e : events) {
    e = make_event(e.t, e.u, e.v);
    if (e.t < alpha || e.t > omega)
      throw Error("event (" + std::to_string(e.t) + "," + std::to_string(e.u) + "," +
                  std::to_string(e.v) + ") lies outside [" + std::to_string(alpha) + "," +
                  std::to_string(omega) + "]");
    s.nodes.push_back(e.u);
    s.nodes.push_back(e.v);
  }
  std::sort(events.begin(), events.end());
  std::sort(s.nodes.begin(), s.nodes.end());
  s.nodes.erase(std::unique(s.nodes.begin(), s.nodes.end()), s.nodes.end());
  s.events = std::move(events);
  return s;
}

// One raw interaction record, endpoints still as labels.
struct LabeledEvent {
  TimeStamp t{};
  std::string u;
  std::string v;
};

// Builds a stream from labeled records. Records with u == v are dropped and
// tallied in `diag`; node ids are assigned in record order.
inline LinkStream build_stream(std::span<const LabeledEvent> records, TimeStamp alpha,
                               TimeStamp omega, StreamDiagnostics* diag = nullptr) {
  auto table = std::make_shared<NodeTable>();
  std::vector<LinkEvent> events;
  events.reserve(records.size());
  std::size_t dropped = 0;
  for (const auto& r : records) {
    if (r.t < alpha || r.t > omega)
      throw Error("event at t=" + std::to_string(r.t) + " (" + r.u + "," + r.v +
                  ") lies outside [" + std::to_string(alpha) + "," + std::to_string(omega) + "]");
    if (r.u == r.v) {
      ++dropped;
      continue;
    }
    // Intern in record order; a single call expression would leave the id
    // assignment to the compiler's argument evaluation order.
    NodeId u = table->intern(r.u);
    NodeId v = table->intern(r.v);
    events.push_back(make_event(r.t, u, v));
  }
  if (diag) diag->self_links_dropped = dropped;
  return make_stream(alpha, omega, std::move(events), {}, std::move(table));
}

// L(S): the largest sub-stream whose links are between nodes of S. Keeps the
// original interval; the node set is exactly S, isolated members included.
inline LinkStream induced_substream(const LinkStream& stream, std::span<const NodeId> keep) {
  std::vector<NodeId> wanted(keep.begin(), keep.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  for (NodeId n : wanted)
    if (!stream.has_node(n))
      throw Error("node " + std::to_string(n) + " is not part of the stream");
  auto in = [&](NodeId n) { return std::binary_search(wanted.begin(), wanted.end(), n); };
  LinkStream out;
  out.alpha = stream.alpha;
  out.omega = stream.omega;
  out.labels = stream.labels;
  for (const auto& e : stream.events)
    if (in(e.u) && in(e.v)) out.events.push_back(e);
  out.nodes = std::move(wanted);
  return out;
}

// Occurrence times of one pair, padded with the enclosing interval, plus the
// gaps between consecutive entries. Gaps always sum to hi - lo.
struct IntercontactSeries {
  NodeId u{};
  NodeId v{};
  std::vector<TimeStamp> boundary_times;  // lo, t_0, ..., t_k, hi
  std::vector<TimeStamp> gaps;            // consecutive differences
};

// Padding interval is explicit: the whole-stream series pads with [alpha,
// omega], per-part series pad with the part's own bounds.
inline IntercontactSeries intercontact_series(NodeId u, NodeId v,
                                              std::span<const TimeStamp> times,
                                              TimeStamp lo, TimeStamp hi) {
  if (u == v) throw Error("intercontact series of a node with itself is undefined");
  if (lo > hi) throw Error("intercontact padding interval has lo > hi");
  IntercontactSeries s;
  if (v < u) std::swap(u, v);
  s.u = u;
  s.v = v;
  s.boundary_times.reserve(times.size() + 2);
  s.boundary_times.push_back(lo);
  s.boundary_times.insert(s.boundary_times.end(), times.begin(), times.end());
  s.boundary_times.push_back(hi);
  s.gaps.reserve(s.boundary_times.size() - 1);
  for (std::size_t i = 1; i < s.boundary_times.size(); ++i)
    s.gaps.push_back(s.boundary_times[i] - s.boundary_times[i - 1]);
  return s;
}

inline IntercontactSeries intercontact(const LinkStream& stream, NodeId u, NodeId v) {
  if (u == v) throw Error("intercontact series of a node with itself is undefined");
  if (!stream.has_node(u)) throw Error("node " + std::to_string(u) + " is not part of the stream");
  if (!stream.has_node(v)) throw Error("node " + std::to_string(v) + " is not part of the stream");
  if (v < u) std::swap(u, v);
  std::vector<TimeStamp> times;
  for (const auto& e : stream.events)
    if (e.u == u && e.v == v) times.push_back(e.t);
  return intercontact_series(u, v, times, stream.alpha, stream.omega);
}

}  // namespace lks
