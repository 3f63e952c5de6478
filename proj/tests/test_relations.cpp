#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "linkstream/oracle.hpp"
#include "linkstream/relations.hpp"

using namespace lks;

namespace {

// Two-part partition whose parts span [a0,b0] and [a1,b1], over disjoint pairs.
StreamPartition two_interval_partition(TimeStamp a0, TimeStamp b0, TimeStamp a1, TimeStamp b1) {
  std::vector<LinkEvent> events = {{a0, 0, 1}, {b0, 0, 1}, {a1, 2, 3}, {b1, 2, 3}};
  std::sort(events.begin(), events.end());
  std::vector<std::uint32_t> labels;
  for (const auto& e : events) labels.push_back(e.u == 0 ? 0 : 1);
  return partition_by_labels(make_stream(0, 100, events), labels);
}

}  // namespace

TEST_CASE("temporal overlap graph boundary conventions") {
  SECTION("overlapping intervals") {
    auto p = two_interval_partition(0, 5, 4, 9);
    REQUIRE(temporal_overlap_graph(p).graph.has_edge(0, 1));
  }
  SECTION("disjoint intervals") {
    auto p = two_interval_partition(0, 3, 4, 9);
    REQUIRE(!temporal_overlap_graph(p).graph.has_edge(0, 1));
  }
  SECTION("touching endpoints intersect (closed intervals)") {
    auto p = two_interval_partition(0, 5, 5, 9);
    REQUIRE(temporal_overlap_graph(p).graph.has_edge(0, 1));
  }
}

TEST_CASE("temporal overlap sweep equals the pairwise oracle and stays output-bounded") {
  std::mt19937_64 rng(211);
  for (int round = 0; round < 100; ++round) {
    auto p = testing::random_nonempty_partition(rng, 6, 30, 100, 5);
    SweepStats stats;
    auto fast = temporal_overlap_graph(p, &stats);
    auto slow = temporal_overlap_oracle(p);
    REQUIRE(fast.graph.nodes == slow.graph.nodes);
    REQUIRE(fast.graph.edges == slow.graph.edges);
    REQUIRE(stats.pushes == p.size());
    REQUIRE(stats.pops <= p.size());
    REQUIRE(stats.emitted == fast.graph.edge_count());
  }
}

TEST_CASE("node overlap graph") {
  SECTION("parts sharing a node are linked") {
    auto s = make_stream(0, 100, {{1, 0, 1}, {9, 0, 2}});
    auto p = partition_by_labels(std::move(s), std::vector<std::uint32_t>{0, 1});
    REQUIRE(node_overlap_graph(p).graph.has_edge(0, 1));
  }
  SECTION("node-disjoint parts are not") {
    auto s = make_stream(0, 100, {{1, 0, 1}, {9, 2, 3}});
    auto p = partition_by_labels(std::move(s), std::vector<std::uint32_t>{0, 1});
    REQUIRE(node_overlap_graph(p).graph.edge_count() == 0);
  }
  SECTION("three parts around one node form a triangle") {
    auto s = make_stream(0, 100, {{1, 0, 1}, {5, 0, 2}, {9, 0, 3}});
    auto p = partition_by_labels(std::move(s), std::vector<std::uint32_t>{0, 1, 2});
    auto y = node_overlap_graph(p);
    REQUIRE(y.graph.edge_count() == 3);
    REQUIRE(y.graph.has_edge(0, 1));
    REQUIRE(y.graph.has_edge(0, 2));
    REQUIRE(y.graph.has_edge(1, 2));
  }
  SECTION("the edge cap is an explicit error") {
    auto s = make_stream(0, 100, {{1, 0, 1}, {5, 0, 2}, {9, 0, 3}});
    auto p = partition_by_labels(std::move(s), std::vector<std::uint32_t>{0, 1, 2});
    REQUIRE_THROWS_AS(node_overlap_graph(p, 2), Error);
  }
}

TEST_CASE("node overlap equals the pairwise-intersection oracle") {
  std::mt19937_64 rng(223);
  for (int round = 0; round < 100; ++round) {
    auto p = testing::random_nonempty_partition(rng, 6, 30, 100, 5);
    auto fast = node_overlap_graph(p);
    auto slow = node_overlap_oracle(p);
    REQUIRE(fast.graph.nodes == slow.graph.nodes);
    REQUIRE(fast.graph.edges == slow.graph.edges);
  }
}

TEST_CASE("quotient graph of a community partition") {
  SECTION("one cross edge") {
    auto g = make_graph({1, 3}, {{0, 2}});
    std::vector<std::vector<NodeId>> comm = {{0, 1}, {2, 3}};
    auto q = quotient_graph(g, comm);
    REQUIRE(q.edge_count() == 1);
    REQUIRE(q.find_edge(0, 1)->weight == 1);
  }
  SECTION("no cross edges") {
    auto g = make_graph({}, {{0, 1}, {2, 3}});
    std::vector<std::vector<NodeId>> comm = {{0, 1}, {2, 3}};
    REQUIRE(quotient_graph(g, comm).edge_count() == 0);
  }
  SECTION("cross-edge weights count links") {
    auto g = make_graph({}, {{0, 2}, {0, 3}, {1, 2}});
    std::vector<std::vector<NodeId>> comm = {{0, 1}, {2, 3}};
    REQUIRE(quotient_graph(g, comm).find_edge(0, 1)->weight == 3);
  }
}

TEST_CASE("quotient stream") {
  SECTION("a link bracketed by two links of the same node") {
    // E_0 = {(1,u,v), (5,u,v')}, E_1 = {(3,u,w)}.
    auto s = make_stream(0, 10, {{1, 0, 1}, {3, 0, 3}, {5, 0, 2}});
    auto p = partition_by_labels(std::move(s), std::vector<std::uint32_t>{0, 1, 0});
    auto q = quotient_stream(p);
    REQUIRE(q.events.size() == 1);
    REQUIRE(q.events[0].t == 3);
    REQUIRE(q.events[0].i == 0);
    REQUIRE(q.events[0].j == 1);
    REQUIRE(q.events[0].multiplicity == 1);
    REQUIRE(q.events[0].dirs == kBracketLow);
    REQUIRE(q.part_count == 2);
    REQUIRE(q.connected_parts() == 2);
  }
  SECTION("one link in the other part brackets nothing") {
    auto s = make_stream(0, 10, {{1, 0, 1}, {3, 0, 3}});
    auto p = partition_by_labels(std::move(s), std::vector<std::uint32_t>{0, 1});
    REQUIRE(quotient_stream(p).events.empty());
  }
  SECTION("node-disjoint parts yield nothing") {
    auto s = make_stream(0, 10, {{1, 0, 1}, {3, 2, 3}, {5, 0, 1}});
    auto p = partition_by_labels(std::move(s), std::vector<std::uint32_t>{0, 1, 0});
    REQUIRE(quotient_stream(p).events.empty());
  }
  SECTION("simultaneous activity brackets in both directions") {
    auto s = make_stream(0, 10, {{5, 0, 1}, {5, 0, 2}});
    auto p = partition_by_labels(std::move(s), std::vector<std::uint32_t>{0, 1});
    auto q = quotient_stream(p);
    REQUIRE(q.events.size() == 1);
    REQUIRE(q.events[0].multiplicity == 2);
    REQUIRE(q.events[0].dirs == (kBracketLow | kBracketHigh));
  }
  SECTION("a single part has no counterpart") {
    auto s = make_stream(0, 10, {{1, 0, 1}, {5, 0, 1}});
    auto p = partition_by_labels(std::move(s), std::vector<std::uint32_t>{0, 0});
    REQUIRE(quotient_stream(p).events.empty());
  }
}

TEST_CASE("quotient stream equals the triple-enumeration oracle") {
  std::mt19937_64 rng(227);
  for (int round = 0; round < 120; ++round) {
    auto p = testing::random_nonempty_partition(rng, 5, 30, 60, 5);
    auto fast = quotient_stream(p);
    auto slow = quotient_stream_oracle(p);
    REQUIRE(fast.alpha == slow.alpha);
    REQUIRE(fast.omega == slow.omega);
    REQUIRE(fast.part_count == slow.part_count);
    REQUIRE(fast.events == slow.events);
  }
}

TEST_CASE("quotient stream induces a subgraph of the node overlap graph") {
  std::mt19937_64 rng(229);
  for (int round = 0; round < 60; ++round) {
    auto p = testing::random_nonempty_partition(rng, 5, 30, 60, 5);
    auto q = quotient_stream(p);
    auto y = node_overlap_graph(p);
    auto qg = induced_graph(q.as_link_stream());
    for (const auto& e : qg.edges) REQUIRE(y.graph.has_edge(e.u, e.v));
  }
}

TEST_CASE("degree series") {
  SECTION("three intervals") {
    // Parts [0,5], [4,9], [20,30].
    std::vector<LinkEvent> events = {{0, 0, 1}, {5, 0, 1}, {4, 2, 3},
                                     {9, 2, 3}, {20, 4, 5}, {30, 4, 5}};
    std::sort(events.begin(), events.end());
    std::vector<std::uint32_t> labels;
    for (const auto& e : events) labels.push_back(e.u / 2);
    auto p = partition_by_labels(make_stream(0, 100, events), labels);
    auto deg = degree_series(temporal_overlap_graph(p));
    REQUIRE(deg == std::vector<std::size_t>{1, 1, 0});
  }
  SECTION("full overlap gives degree k-1") {
    auto s = make_stream(0, 10, {{1, 0, 1}, {1, 2, 3}, {1, 4, 5}});
    auto p = partition_by_labels(std::move(s), std::vector<std::uint32_t>{0, 1, 2});
    auto deg = degree_series(temporal_overlap_graph(p));
    REQUIRE(deg == std::vector<std::size_t>{2, 2, 2});
  }
  SECTION("empty graph is all zeros") {
    auto g = make_graph({0, 1, 2}, {});
    REQUIRE(degree_series(g, 3) == std::vector<std::size_t>{0, 0, 0});
  }
}
