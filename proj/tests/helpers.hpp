#pragma once

#include <random>

#include "linkstream/partition.hpp"
#include "linkstream/random.hpp"
#include "linkstream/stream.hpp"

namespace lks::testing {

// Random stream over [0, max_time] with n_nodes kept in V even when isolated.
inline LinkStream random_stream(std::mt19937_64& rng, std::size_t max_nodes,
                                std::size_t max_events, TimeStamp max_time) {
  auto n = static_cast<NodeId>(uniform_range(rng, 2, static_cast<std::int64_t>(max_nodes)));
  auto m = static_cast<std::size_t>(uniform_range(rng, 0, static_cast<std::int64_t>(max_events)));
  std::vector<LinkEvent> events;
  events.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto u = static_cast<NodeId>(uniform_below(rng, n));
    auto v = static_cast<NodeId>(uniform_below(rng, n - 1));
    if (v >= u) ++v;
    events.push_back(make_event(uniform_range(rng, 0, max_time), u, v));
  }
  std::vector<NodeId> nodes(n);
  for (NodeId i = 0; i < n; ++i) nodes[i] = i;
  return make_stream(0, max_time, std::move(events), std::move(nodes));
}

// Random partition of the stream's events into at most max_parts parts.
inline StreamPartition random_partition(std::mt19937_64& rng, LinkStream stream,
                                        std::size_t max_parts) {
  auto k = static_cast<std::uint32_t>(uniform_range(rng, 1, static_cast<std::int64_t>(max_parts)));
  std::vector<std::uint32_t> labels(stream.events.size());
  for (auto& l : labels) l = static_cast<std::uint32_t>(uniform_below(rng, k));
  return partition_by_labels(std::move(stream), labels);
}

// A stream that always has at least one event, for partition-based tests.
inline StreamPartition random_nonempty_partition(std::mt19937_64& rng, std::size_t max_nodes,
                                                 std::size_t max_events, TimeStamp max_time,
                                                 std::size_t max_parts) {
  while (true) {
    auto s = random_stream(rng, max_nodes, max_events, max_time);
    if (s.events.empty()) continue;
    return random_partition(rng, std::move(s), max_parts);
  }
}

}  // namespace lks::testing
