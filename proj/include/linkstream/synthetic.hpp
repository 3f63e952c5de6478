#pragma once

#include <cmath>
#include <unordered_set>

#include "linkstream/ingest.hpp"
#include "linkstream/random.hpp"

namespace lks {

// Planted-thread generator: dense reply bursts among small author groups over
// short windows, on top of sparse background traffic. Background interactions
// are emitted as 2-message threads (root + one reply) so that the thread
// partition still covers every event of the stream.
struct SyntheticConfig {
  struct Range {
    std::int64_t lo{};
    std::int64_t hi{};
  };

  std::uint32_t node_pool = 100;
  std::uint32_t n_threads = 20;
  Range thread_messages{4, 12};
  Range thread_authors{2, 5};
  Range thread_duration{3'600, 86'400};   // seconds
  TimeStamp start = 0;
  TimeStamp horizon = 7'776'000;          // 90 days
  double background_rate = 1e-4;          // events per second
  std::uint64_t seed = 1;
};

struct SyntheticData {
  std::vector<Message> messages;               // sorted by (time, id)
  std::vector<std::string> truth;              // per message: its thread root id
  std::vector<Thread> threads;                 // resolve_threads view of the messages
  StreamBundle bundle;
  std::unordered_set<std::string> planted_roots;
  TimeStamp mean_planted_duration = 0;         // realized mean of the drawn durations

  bool part_is_planted(std::uint32_t part) const {
    return planted_roots.count(threads[bundle.part_thread[part]].root_id) > 0;
  }
};

namespace detail {

inline void check_range(const SyntheticConfig::Range& r, std::int64_t min_lo,
                        const char* what) {
  if (r.lo > r.hi || r.lo < min_lo)
    throw Error(std::string("infeasible config: ") + what + " range [" + std::to_string(r.lo) +
                "," + std::to_string(r.hi) + "]");
}

}  // namespace detail

inline SyntheticData generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.n_threads == 0) throw Error("infeasible config: zero planted threads");
  if (cfg.node_pool < 2) throw Error("infeasible config: node pool smaller than 2");
  detail::check_range(cfg.thread_messages, 2, "thread message count");
  detail::check_range(cfg.thread_authors, 2, "thread author count");
  detail::check_range(cfg.thread_duration, 1, "thread duration");
  if (cfg.thread_authors.hi > cfg.node_pool)
    throw Error("infeasible config: thread author count exceeds the node pool");
  if (cfg.horizon <= cfg.thread_duration.hi)
    throw Error("infeasible config: horizon shorter than the longest thread");
  if (cfg.background_rate < 0) throw Error("infeasible config: negative background rate");

  std::mt19937_64 rng(cfg.seed);
  auto author_name = [](std::uint32_t n) { return "user" + std::to_string(n); };

  SyntheticData data;
  std::vector<std::pair<Message, std::string>> staged;  // message + its truth root

  int128 duration_total = 0;
  for (std::uint32_t k = 0; k < cfg.n_threads; ++k) {
    auto n_msg = static_cast<std::size_t>(
        uniform_range(rng, cfg.thread_messages.lo, cfg.thread_messages.hi));
    auto n_auth = static_cast<std::uint32_t>(std::min<std::int64_t>(
        uniform_range(rng, cfg.thread_authors.lo, cfg.thread_authors.hi),
        static_cast<std::int64_t>(n_msg)));
    n_auth = std::max<std::uint32_t>(n_auth, 2);
    TimeStamp dur = uniform_range(rng, cfg.thread_duration.lo, cfg.thread_duration.hi);
    duration_total += dur;
    TimeStamp t0 = uniform_range(rng, cfg.start, cfg.start + cfg.horizon - dur);
    auto authors = sample_distinct(rng, cfg.node_pool, n_auth);

    // Reply offsets: the last one is pinned to `dur` so the drawn duration is
    // realized exactly.
    std::vector<TimeStamp> offsets;
    offsets.reserve(n_msg - 1);
    for (std::size_t r = 0; r + 2 < n_msg; ++r) offsets.push_back(uniform_range(rng, 0, dur));
    offsets.push_back(dur);
    std::sort(offsets.begin(), offsets.end());

    std::string prefix = "p" + std::to_string(k) + "-";
    std::vector<Message> thread_msgs;
    Message root;
    root.id = prefix + "0";
    root.time = t0;
    root.author = author_name(authors[uniform_below(rng, authors.size())]);
    root.parent = root.id;
    thread_msgs.push_back(root);
    for (std::size_t r = 1; r < n_msg; ++r) {
      Message m;
      m.id = prefix + std::to_string(r);
      m.time = t0 + offsets[r - 1];
      const Message& parent = thread_msgs[uniform_below(rng, r)];
      m.parent = parent.id;
      // Pick an author other than the parent's, so every reply yields a link.
      while (true) {
        m.author = author_name(authors[uniform_below(rng, authors.size())]);
        if (m.author != parent.author) break;
      }
      thread_msgs.push_back(std::move(m));
    }
    data.planted_roots.insert(root.id);
    for (auto& m : thread_msgs) staged.emplace_back(std::move(m), prefix + "0");
  }
  data.mean_planted_duration =
      static_cast<TimeStamp>(duration_total / static_cast<int128>(cfg.n_threads));

  auto n_background = static_cast<std::uint64_t>(
      std::llround(cfg.background_rate * static_cast<double>(cfg.horizon)));
  for (std::uint64_t b = 0; b < n_background; ++b) {
    auto pair = sample_distinct(rng, cfg.node_pool, 2);
    TimeStamp t = uniform_range(rng, cfg.start, cfg.start + cfg.horizon);
    TimeStamp gap = uniform_range(rng, 0, std::min<TimeStamp>(3'600, cfg.start + cfg.horizon - t));
    std::string prefix = "b" + std::to_string(b) + "-";
    Message root{prefix + "0", t, author_name(pair[0]), prefix + "0"};
    Message reply{prefix + "1", t + gap, author_name(pair[1]), prefix + "0"};
    staged.emplace_back(std::move(root), prefix + "0");
    staged.emplace_back(std::move(reply), prefix + "0");
  }

  std::sort(staged.begin(), staged.end(), [](const auto& a, const auto& b) {
    return std::pair<TimeStamp, const std::string&>{a.first.time, a.first.id} <
           std::pair<TimeStamp, const std::string&>{b.first.time, b.first.id};
  });
  data.messages.reserve(staged.size());
  data.truth.reserve(staged.size());
  for (auto& [m, root] : staged) {
    data.messages.push_back(std::move(m));
    data.truth.push_back(root);
  }

  data.threads = resolve_threads(data.messages);
  data.bundle = to_stream_and_partition(data.threads, data.messages);
  return data;
}

}  // namespace lks
