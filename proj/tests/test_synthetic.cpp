#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "linkstream/density.hpp"
#include "linkstream/synthetic.hpp"

using namespace lks;

namespace {

bool same_messages(const std::vector<Message>& a, const std::vector<Message>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].id != b[i].id || a[i].time != b[i].time || a[i].author != b[i].author ||
        a[i].parent != b[i].parent)
      return false;
  return true;
}

std::string csv_of(const SyntheticData& data) {
  std::ostringstream out;
  write_messages(out, data.messages);
  return out.str();
}

}  // namespace

TEST_CASE("generator determinism") {
  SyntheticConfig cfg;
  cfg.seed = 42;
  auto a = generate_synthetic(cfg);
  auto b = generate_synthetic(cfg);
  REQUIRE(same_messages(a.messages, b.messages));
  REQUIRE(csv_of(a) == csv_of(b));
  REQUIRE(a.mean_planted_duration == b.mean_planted_duration);

  cfg.seed = 43;
  auto c = generate_synthetic(cfg);
  REQUIRE(!same_messages(a.messages, c.messages));
}

TEST_CASE("infeasible configurations are errors") {
  SECTION("zero planted threads") {
    SyntheticConfig cfg;
    cfg.n_threads = 0;
    REQUIRE_THROWS_AS(generate_synthetic(cfg), Error);
  }
  SECTION("thread larger than the node pool") {
    SyntheticConfig cfg;
    cfg.node_pool = 3;
    cfg.thread_authors = {2, 10};
    REQUIRE_THROWS_AS(generate_synthetic(cfg), Error);
  }
  SECTION("horizon shorter than the longest thread") {
    SyntheticConfig cfg;
    cfg.horizon = 1000;
    cfg.thread_duration = {100, 2000};
    REQUIRE_THROWS_AS(generate_synthetic(cfg), Error);
  }
  SECTION("author groups below two cannot make links") {
    SyntheticConfig cfg;
    cfg.thread_authors = {1, 3};
    REQUIRE_THROWS_AS(generate_synthetic(cfg), Error);
  }
}

TEST_CASE("planted structure") {
  SyntheticConfig cfg;
  cfg.seed = 7;
  auto data = generate_synthetic(cfg);

  SECTION("messages are sorted and threads are clean") {
    for (std::size_t i = 1; i < data.messages.size(); ++i)
      REQUIRE(data.messages[i - 1].time <= data.messages[i].time);
    for (const auto& t : data.threads) {
      REQUIRE(t.consistent);
      REQUIRE(t.complete);
    }
  }
  SECTION("every planted thread becomes a part; background parts are single events") {
    std::size_t planted_parts = 0;
    for (std::uint32_t i = 0; i < data.bundle.partition.size(); ++i) {
      if (data.part_is_planted(i)) {
        ++planted_parts;
        REQUIRE(data.bundle.partition.parts[i].event_count() >= 3);
      } else {
        REQUIRE(data.bundle.partition.parts[i].event_count() == 1);
      }
    }
    REQUIRE(planted_parts == cfg.n_threads);
  }
  SECTION("ground truth matches the resolver's grouping") {
    std::unordered_map<std::string, std::string> by_id;
    for (std::size_t i = 0; i < data.messages.size(); ++i)
      by_id[data.messages[i].id] = data.truth[i];
    for (const auto& t : data.threads)
      for (auto mi : t.members) REQUIRE(by_id.at(data.messages[mi].id) == t.root_id);
  }
  SECTION("realized mean duration sits inside the configured range") {
    REQUIRE(data.mean_planted_duration >= cfg.thread_duration.lo);
    REQUIRE(data.mean_planted_duration <= cfg.thread_duration.hi);
  }
}

TEST_CASE("a single planted thread is at least as dense as its own stream") {
  SyntheticConfig cfg;
  cfg.n_threads = 1;
  cfg.thread_messages = {4, 4};
  cfg.thread_authors = {2, 2};
  cfg.background_rate = 0;
  cfg.seed = 11;
  auto data = generate_synthetic(cfg);
  Delta d{cfg.thread_duration.lo / 2};
  auto intra = intra_thread_delta_density(data.bundle.partition, d);
  auto global = delta_density(*data.bundle.stream, d);
  REQUIRE(!intra.is_degenerate());
  REQUIRE(intra.ratio() >= global.ratio());
}

TEST_CASE("median planted-thread density beats the global stream density") {
  SyntheticConfig cfg;  // default generator parameters
  cfg.seed = 5;
  auto data = generate_synthetic(cfg);
  Delta d{data.mean_planted_duration};

  IntraThreadEvaluator eval(data.bundle.partition);
  std::vector<Rational> per_thread;
  for (std::size_t i = 0; i < data.bundle.partition.size(); ++i) {
    auto v = eval.per_part(i, d);
    if (!v.is_degenerate()) per_thread.push_back(v.ratio());
  }
  REQUIRE(!per_thread.empty());
  std::sort(per_thread.begin(), per_thread.end());
  Rational median = per_thread[per_thread.size() / 2];
  auto global = delta_density(*data.bundle.stream, d);
  REQUIRE(median > global.ratio());
}

TEST_CASE("generated tables round-trip through the ingest pipeline") {
  SyntheticConfig cfg;
  cfg.seed = 13;
  auto data = generate_synthetic(cfg);
  std::istringstream in(csv_of(data));
  auto messages = parse_messages(in);
  REQUIRE(same_messages(messages, data.messages));

  CleaningPolicy permissive;
  permissive.max_thread_duration.reset();
  permissive.start_cutoff.reset();
  auto threads = resolve_threads(messages);
  TimeWindow window{cfg.start, cfg.start + cfg.horizon + 3'600};
  auto cleaned = clean(threads, messages, permissive, window);
  REQUIRE(cleaned.report.removed() == 0);
  REQUIRE(cleaned.threads.size() == threads.size());
}
