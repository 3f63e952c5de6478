#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "linkstream/ingest.hpp"

using namespace lks;

namespace {

std::vector<Message> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_messages(in);
}

const Thread& thread_of(const std::vector<Thread>& threads, std::span<const Message> messages,
                        const std::string& id) {
  for (const auto& t : threads)
    for (auto m : t.members)
      if (messages[m].id == id) return t;
  throw Error("no thread contains " + id);
}

}  // namespace

TEST_CASE("parse_messages") {
  SECTION("empty parent marks a root and normalizes to itself") {
    auto m = parse("id,timestamp,author,parent\nm1,100,alice,\n");
    REQUIRE(m.size() == 1);
    REQUIRE(m[0].parent == "m1");
    REQUIRE(m[0].is_root());
    REQUIRE(m[0].time == 100);
    REQUIRE(m[0].author == "alice");
  }
  SECTION("reply rows keep their parent") {
    auto m = parse("id,timestamp,author,parent\nm1,100,alice,\nm2,150,bob,m1\n");
    REQUIRE(m.size() == 2);
    REQUIRE(m[1].parent == "m1");
    REQUIRE(!m[1].is_root());
  }
  SECTION("dangling parents parse fine") {
    auto m = parse("id,timestamp,author,parent\nm2,150,bob,mX\n");
    REQUIRE(m.size() == 1);
    REQUIRE(m[0].parent == "mX");
  }
  SECTION("tab-separated tables are sniffed from the header") {
    auto m = parse("id\ttimestamp\tauthor\tparent\nm1\t100\talice\t\n");
    REQUIRE(m.size() == 1);
    REQUIRE(m[0].author == "alice");
  }
  SECTION("malformed rows name the line") {
    try {
      parse("id,timestamp,author,parent\nm1,100,alice,\nbroken,row\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      REQUIRE(e.line == 3);
    }
  }
  SECTION("duplicate ids name the id") {
    REQUIRE_THROWS_WITH(parse("id,timestamp,author,parent\nm1,100,alice,\nm1,200,bob,\n"),
                        Catch::Matchers::ContainsSubstring("m1"));
  }
  SECTION("non-integer timestamps are rejected") {
    REQUIRE_THROWS_AS(parse("id,timestamp,author,parent\nm1,12:30,alice,\n"), ParseError);
  }
  SECTION("the header is required") {
    REQUIRE_THROWS_AS(parse("m1,100,alice,\n"), ParseError);
    REQUIRE_THROWS_AS(parse(""), ParseError);
  }
  SECTION("empty ids are rejected") {
    REQUIRE_THROWS_AS(parse("id,timestamp,author,parent\n,100,alice,\n"), ParseError);
  }
  SECTION("write_messages round-trips") {
    auto m = parse("id,timestamp,author,parent\nm1,100,alice,\nm2,150,bob,m1\n");
    std::ostringstream out;
    write_messages(out, m);
    auto again = parse(out.str());
    REQUIRE(again.size() == m.size());
    REQUIRE(again[0].parent == m[0].parent);
    REQUIRE(again[1].parent == m[1].parent);
  }
}

TEST_CASE("resolve_threads") {
  SECTION("reply closure") {
    std::vector<Message> m = {{"m1", 100, "a", "m1"}, {"m2", 150, "b", "m1"},
                              {"m3", 200, "c", "m2"}};
    auto threads = resolve_threads(m);
    REQUIRE(threads.size() == 1);
    REQUIRE(threads[0].size() == 3);
    REQUIRE(threads[0].root_id == "m1");
    REQUIRE(threads[0].consistent);
    REQUIRE(threads[0].complete);
    REQUIRE(threads[0].first_time == 100);
    REQUIRE(threads[0].last_time == 200);
  }
  SECTION("a reply older than its parent flags the thread inconsistent") {
    std::vector<Message> m = {{"m1", 100, "a", "m1"}, {"m2", 50, "b", "m1"}};
    auto threads = resolve_threads(m);
    REQUIRE(threads.size() == 1);
    REQUIRE(!threads[0].consistent);
    REQUIRE(threads[0].complete);
  }
  SECTION("dangling parents flag the thread incomplete, rooted at the oldest member") {
    std::vector<Message> m = {{"m3", 300, "c", "m2"}, {"m2", 150, "b", "mX"}};
    auto threads = resolve_threads(m);
    REQUIRE(threads.size() == 1);
    REQUIRE(!threads[0].complete);
    REQUIRE(threads[0].root_id == "m2");
  }
  SECTION("chains hitting the same missing id join one thread") {
    std::vector<Message> m = {{"m2", 150, "b", "mX"}, {"m3", 160, "c", "mX"},
                              {"m4", 170, "d", "m3"}};
    auto threads = resolve_threads(m);
    REQUIRE(threads.size() == 1);
    REQUIRE(threads[0].size() == 3);
    REQUIRE(!threads[0].complete);
  }
  SECTION("chains hitting different missing ids stay separate") {
    std::vector<Message> m = {{"m2", 150, "b", "mX"}, {"m3", 160, "c", "mY"}};
    auto threads = resolve_threads(m);
    REQUIRE(threads.size() == 2);
  }
  SECTION("a parent cycle is an inconsistent thread") {
    std::vector<Message> m = {{"m1", 100, "a", "m2"}, {"m2", 150, "b", "m1"},
                              {"m3", 200, "c", "m2"}};
    auto threads = resolve_threads(m);
    REQUIRE(threads.size() == 1);
    REQUIRE(threads[0].size() == 3);
    REQUIRE(!threads[0].consistent);
    REQUIRE(threads[0].complete);
  }
  SECTION("every message lands in exactly one thread") {
    std::vector<Message> m = {{"m1", 100, "a", "m1"}, {"m2", 150, "b", "m1"},
                              {"n1", 120, "c", "n1"}, {"n2", 130, "d", "nX"},
                              {"c1", 10, "e", "c2"},  {"c2", 20, "f", "c1"}};
    auto threads = resolve_threads(m);
    std::size_t total = 0;
    std::vector<bool> seen(m.size(), false);
    for (const auto& t : threads) {
      total += t.size();
      for (auto mi : t.members) {
        REQUIRE(!seen[mi]);
        seen[mi] = true;
      }
    }
    REQUIRE(total == m.size());
  }
}

TEST_CASE("clean") {
  const TimeWindow window{0, 200'000'000};
  SECTION("threads longer than the limit are removed") {
    std::vector<Message> m = {{"m1", 0, "a", "m1"}, {"m2", 94'608'000, "b", "m1"}};  // 3 years
    auto threads = resolve_threads(m);
    auto result = clean(std::move(threads), m, CleaningPolicy{}, window);
    REQUIRE(result.report.too_long == 1);
    REQUIRE(result.threads.empty());
  }
  SECTION("an early short thread survives") {
    std::vector<Message> m = {{"m1", 1000, "a", "m1"}, {"m2", 87'400, "b", "m1"}};
    auto result = clean(resolve_threads(m), m, CleaningPolicy{}, window);
    REQUIRE(result.report.kept == 1);
    REQUIRE(result.threads.size() == 1);
    REQUIRE(result.threads[0].within_duration);
    REQUIRE(result.threads[0].within_start_cutoff);
  }
  SECTION("threads starting inside the cutoff window are removed") {
    std::vector<Message> m = {{"m1", 190'000'000, "a", "m1"}, {"m2", 190'000'100, "b", "m1"}};
    auto result = clean(resolve_threads(m), m, CleaningPolicy{}, window);
    REQUIRE(result.report.late_start == 1);
  }
  SECTION("disabling every filter is the identity") {
    std::vector<Message> m = {{"m1", 0, "a", "m1"},
                              {"m2", 94'608'000, "b", "m1"},
                              {"m3", 199'999'999, "c", "mX"},
                              {"m4", 50, "d", "m5"},
                              {"m5", 40, "e", "m4"}};
    CleaningPolicy off;
    off.max_thread_duration.reset();
    off.start_cutoff.reset();
    off.drop_inconsistent = false;
    off.drop_incomplete = false;
    auto threads = resolve_threads(m);
    auto result = clean(threads, m, off, window);
    REQUIRE(result.report.removed() == 0);
    REQUIRE(result.threads.size() == threads.size());
  }
  SECTION("clean is idempotent") {
    std::vector<Message> m = {{"m1", 0, "a", "m1"},
                              {"m2", 94'608'000, "b", "m1"},
                              {"m3", 100, "c", "m3"},
                              {"m4", 150, "d", "m3"},
                              {"m5", 199'000'000, "e", "m5"}};
    auto first = clean(resolve_threads(m), m, CleaningPolicy{}, window);
    auto second = clean(first.threads, m, CleaningPolicy{}, window);
    REQUIRE(second.report.removed() == 0);
    REQUIRE(second.threads.size() == first.threads.size());
  }
  SECTION("a zero duration limit removes every multi-timestamp thread") {
    std::vector<Message> m = {{"m1", 100, "a", "m1"}, {"m2", 101, "b", "m1"},
                              {"m3", 500, "c", "m3"}};
    CleaningPolicy policy;
    policy.max_thread_duration = 0;
    policy.start_cutoff.reset();
    auto result = clean(resolve_threads(m), m, policy, window);
    REQUIRE(result.report.too_long == 1);
    REQUIRE(result.threads.size() == 1);
    REQUIRE(result.threads[0].root_id == "m3");
  }
  SECTION("guard bands mark edge-touching threads incomplete") {
    std::vector<Message> m = {{"m1", 5, "a", "m1"}, {"m2", 10, "b", "m1"},
                              {"m3", 5000, "c", "m3"}, {"m4", 5100, "d", "m3"}};
    CleaningPolicy policy;
    policy.start_cutoff.reset();
    policy.edge_guard = 100;
    auto result = clean(resolve_threads(m), m, policy, TimeWindow{0, 10'000});
    REQUIRE(result.report.incomplete == 1);
    REQUIRE(result.threads.size() == 1);
    REQUIRE(result.threads[0].root_id == "m3");
  }
  SECTION("messages outside the window are an error") {
    std::vector<Message> m = {{"m1", 100, "a", "m1"}};
    REQUIRE_THROWS_AS(clean(resolve_threads(m), m, CleaningPolicy{}, TimeWindow{0, 50}), Error);
  }
}

TEST_CASE("to_stream_and_partition") {
  SECTION("one event per non-root reply") {
    std::vector<Message> m = {{"m1", 100, "alice", "m1"},
                              {"m2", 150, "bob", "m1"},
                              {"m3", 200, "alice", "m2"}};
    auto threads = resolve_threads(m);
    auto bundle = to_stream_and_partition(threads, m);
    const auto& s = *bundle.stream;
    REQUIRE(s.events.size() == 2);
    REQUIRE(s.alpha == 150);
    REQUIRE(s.omega == 200);
    REQUIRE(s.labels->label(0) == "bob");  // first event interns bob first
    REQUIRE(s.labels->label(1) == "alice");
    REQUIRE(bundle.partition.size() == 1);
    REQUIRE(bundle.root_messages == 1);
    REQUIRE(bundle.self_replies == 0);
  }
  SECTION("root-only threads are excluded from the partition") {
    std::vector<Message> m = {{"m1", 100, "alice", "m1"},
                              {"solo", 120, "zoe", "solo"},
                              {"m2", 150, "bob", "m1"}};
    auto threads = resolve_threads(m);
    auto bundle = to_stream_and_partition(threads, m);
    REQUIRE(bundle.partition.size() == 1);
    REQUIRE(bundle.part_thread.size() == 1);
    REQUIRE(threads[bundle.part_thread[0]].root_id == "m1");
  }
  SECTION("two threads split the events") {
    std::vector<Message> m = {{"m1", 100, "a", "m1"}, {"m2", 150, "b", "m1"},
                              {"n1", 120, "c", "n1"}, {"n2", 170, "d", "n1"}};
    auto bundle = to_stream_and_partition(resolve_threads(m), m);
    REQUIRE(bundle.partition.size() == 2);
    REQUIRE(bundle.partition.parts[0].events.size() == 1);
    REQUIRE(bundle.partition.parts[1].events.size() == 1);
  }
  SECTION("self-replies and dangling replies make no event") {
    std::vector<Message> m = {{"m1", 100, "alice", "m1"},
                              {"m2", 150, "alice", "m1"},   // self-reply
                              {"m3", 200, "bob", "m1"},
                              {"m4", 250, "carol", "mX"},   // dangling
                              {"m5", 300, "dave", "m4"}};
    auto threads = resolve_threads(m);
    auto bundle = to_stream_and_partition(threads, m);
    REQUIRE(bundle.self_replies == 1);
    REQUIRE(bundle.dangling_replies == 1);
    REQUIRE(bundle.root_messages == 1);
    // |events| = messages - roots - self-replies - dangling replies
    REQUIRE(bundle.stream->events.size() ==
            m.size() - bundle.root_messages - bundle.self_replies - bundle.dangling_replies);
  }
  SECTION("an all-root corpus has no stream") {
    std::vector<Message> m = {{"m1", 100, "a", "m1"}, {"m2", 150, "b", "m2"}};
    REQUIRE_THROWS_AS(to_stream_and_partition(resolve_threads(m), m), Error);
  }
}

TEST_CASE("thread of helper sanity") {
  std::vector<Message> m = {{"m1", 100, "a", "m1"}, {"m2", 150, "b", "m1"}};
  auto threads = resolve_threads(m);
  REQUIRE(thread_of(threads, m, "m2").root_id == "m1");
}
