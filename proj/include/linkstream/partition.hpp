#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <span>

#include "linkstream/stream.hpp"

namespace lks {

constexpr std::uint32_t kUnlabeled = std::numeric_limits<std::uint32_t>::max();

// One part P_i = (T_i, V_i, E_i) of a partition. Bounds and node set are
// derived from the part's events, never user-supplied, so alpha/omega are the
// min/max event time and parts are never empty.
struct SubStream {
  TimeStamp alpha{0};
  TimeStamp omega{0};
  std::vector<NodeId> nodes;            // sorted, unique endpoints
  std::vector<std::uint32_t> events;    // ascending indices into parent events

  TimeStamp duration() const { return omega - alpha; }
  std::size_t event_count() const { return events.size(); }
};

// Disjoint split of a stream's events into sub-streams. Parts may overlap in
// nodes and time; every parent event belongs to exactly one part.
struct StreamPartition {
  std::shared_ptr<const LinkStream> parent;
  std::vector<SubStream> parts;
  std::vector<std::uint32_t> part_of;  // aligned with parent->events

  const LinkStream& stream() const { return *parent; }
  std::size_t size() const { return parts.size(); }
};

// `labels[e]` names the part of event e; ids are compacted to 0..k-1 in
// ascending label order. kUnlabeled (or a size mismatch) is an error.
inline StreamPartition partition_by_labels(std::shared_ptr<const LinkStream> stream,
                                           std::span<const std::uint32_t> labels) {
  if (!stream) throw Error("partition requires a stream");
  if (labels.size() != stream->events.size())
    throw Error("label count (" + std::to_string(labels.size()) + ") does not match event count (" +
                std::to_string(stream->events.size()) + ")");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == kUnlabeled)
      throw Error("event " + std::to_string(i) + " is unlabeled");

  std::map<std::uint32_t, std::uint32_t> compact;
  for (auto l : labels) compact.emplace(l, 0);
  std::uint32_t next = 0;
  for (auto& [label, id] : compact) id = next++;

  StreamPartition p;
  p.parent = std::move(stream);
  p.parts.resize(compact.size());
  p.part_of.resize(labels.size());
  for (std::uint32_t e = 0; e < labels.size(); ++e) {
    std::uint32_t part = compact.at(labels[e]);
    p.part_of[e] = part;
    p.parts[part].events.push_back(e);
  }
  for (auto& part : p.parts) {
    const auto& events = p.parent->events;
    part.alpha = events[part.events.front()].t;
    part.omega = events[part.events.back()].t;
    for (auto e : part.events) {
      part.nodes.push_back(events[e].u);
      part.nodes.push_back(events[e].v);
    }
    std::sort(part.nodes.begin(), part.nodes.end());
    part.nodes.erase(std::unique(part.nodes.begin(), part.nodes.end()), part.nodes.end());
  }
  return p;
}

inline StreamPartition partition_by_labels(LinkStream stream,
                                           std::span<const std::uint32_t> labels) {
  return partition_by_labels(std::make_shared<const LinkStream>(std::move(stream)), labels);
}

}  // namespace lks
