#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>

#include "linkstream/partition.hpp"
#include "linkstream/stream.hpp"
#include "linkstream/types.hpp"

namespace lks {

// One reply record. A root message replies to itself (p(m) = m); an empty
// parent field in the table means root and is normalized on parse.
struct Message {
  std::string id;
  TimeStamp time{};
  std::string author;
  std::string parent;

  bool is_root() const { return parent == id; }
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline TimeStamp parse_timestamp(std::string_view s, std::size_t line) {
  TimeStamp value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "timestamp '" + std::string(s) + "' is not an integer");
  return value;
}

}  // namespace detail

// Reads the message table: header `id,timestamp,author,parent`, comma or tab
// separated (sniffed from the header), UTF-8, no quoting. Timestamps are
// integer UTC seconds. Duplicate ids and malformed rows are errors.
inline std::vector<Message> parse_messages(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  char delim = line.find('\t') != std::string::npos ? '\t' : ',';
  {
    auto header = detail::split_fields(line, delim);
    const std::vector<std::string_view> want = {"id", "timestamp", "author", "parent"};
    if (std::vector<std::string_view>(header.begin(), header.end()) != want)
      throw ParseError(1, "expected header id,timestamp,author,parent");
  }
  std::vector<Message> out;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = detail::split_fields(line, delim);
    if (fields.size() != 4)
      throw ParseError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    Message m;
    m.id = std::string(fields[0]);
    if (m.id.empty()) throw ParseError(line_no, "empty message id");
    m.time = detail::parse_timestamp(fields[1], line_no);
    m.author = std::string(fields[2]);
    m.parent = fields[3].empty() ? m.id : std::string(fields[3]);
    if (!seen.emplace(m.id, line_no).second)
      throw ParseError(line_no, "duplicate message id '" + m.id + "'");
    out.push_back(std::move(m));
  }
  return out;
}

inline std::vector<Message> parse_messages_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_messages(in);
}

// Writes the same table format; roots get an empty parent field.
inline void write_messages(std::ostream& out, std::span<const Message> messages) {
  out << "id,timestamp,author,parent\n";
  for (const auto& m : messages)
    out << m.id << ',' << m.time << ',' << m.author << ','
        << (m.is_root() ? std::string() : m.parent) << '\n';
}

// Reply closure of one root (or of the oldest reachable member when the real
// root is missing or the parent chain cycles).
struct Thread {
  std::string root_id;
  std::vector<std::uint32_t> members;  // indices into the message list, by (time, id)
  bool consistent = true;   // no reply older than its parent, no parent cycle
  bool complete = true;     // no dangling parent reference
  bool within_duration = true;      // filled in by clean()
  bool within_start_cutoff = true;  // filled in by clean()
  TimeStamp first_time{};
  TimeStamp last_time{};

  std::size_t size() const { return members.size(); }
  TimeStamp span() const { return last_time - first_time; }
};

// Groups every message into exactly one thread by following parent chains.
// Chains ending at the same missing id form one incomplete thread; chains
// entering a rootless cycle form one inconsistent thread.
inline std::vector<Thread> resolve_threads(std::span<const Message> messages) {
  constexpr std::uint32_t kMissing = std::numeric_limits<std::uint32_t>::max();
  std::size_t n = messages.size();
  std::unordered_map<std::string_view, std::uint32_t> by_id;
  by_id.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) by_id.emplace(messages[i].id, i);

  std::vector<std::uint32_t> parent(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto it = by_id.find(messages[i].parent);
    parent[i] = it == by_id.end() ? kMissing : it->second;
  }

  // Group keys: the root index, the missing parent id, or the entry point of
  // a parent cycle.
  struct Group {
    std::vector<std::uint32_t> members;
    bool complete = true;
    bool consistent = true;
    std::optional<std::uint32_t> root;  // set for true roots
  };
  std::vector<std::int32_t> group_of(n, -1);
  std::vector<Group> groups;
  auto new_group = [&]() {
    groups.emplace_back();
    return static_cast<std::int32_t>(groups.size() - 1);
  };
  // Chains ending at the same missing id belong to the same (partial) thread.
  std::unordered_map<std::string_view, std::int32_t> dangling_groups;

  std::vector<std::uint32_t> path;
  std::vector<std::uint8_t> on_path(n, 0);
  for (std::uint32_t start = 0; start < n; ++start) {
    if (group_of[start] != -1) continue;
    path.clear();
    std::uint32_t cur = start;
    std::int32_t g = -1;
    while (true) {
      if (group_of[cur] != -1) {  // joined an already-resolved chain
        g = group_of[cur];
        break;
      }
      if (on_path[cur]) {  // rootless parent cycle
        g = new_group();
        groups[g].consistent = false;
        break;
      }
      on_path[cur] = 1;
      path.push_back(cur);
      if (parent[cur] == cur) {  // true root
        g = new_group();
        groups[g].root = cur;
        break;
      }
      if (parent[cur] == kMissing) {  // dangling reference
        auto [it, fresh] = dangling_groups.try_emplace(messages[cur].parent, -1);
        if (fresh) {
          it->second = new_group();
          groups[it->second].complete = false;
        }
        g = it->second;
        break;
      }
      cur = parent[cur];
    }
    for (std::uint32_t m : path) {
      on_path[m] = 0;
      group_of[m] = g;
      groups[g].members.push_back(m);
    }
  }

  // A reply older than its parent taints the whole thread.
  for (std::uint32_t i = 0; i < n; ++i)
    if (parent[i] != kMissing && parent[i] != i && messages[i].time < messages[parent[i]].time)
      groups[group_of[i]].consistent = false;

  std::vector<Thread> threads;
  threads.reserve(groups.size());
  for (auto& g : groups) {
    Thread t;
    t.consistent = g.consistent;
    t.complete = g.complete;
    std::sort(g.members.begin(), g.members.end(), [&](std::uint32_t a, std::uint32_t b) {
      return std::pair<TimeStamp, const std::string&>{messages[a].time, messages[a].id} <
             std::pair<TimeStamp, const std::string&>{messages[b].time, messages[b].id};
    });
    t.members = std::move(g.members);
    t.root_id = g.root ? messages[*g.root].id : messages[t.members.front()].id;
    t.first_time = messages[t.members.front()].time;
    t.last_time = messages[t.members.back()].time;
    threads.push_back(std::move(t));
  }
  std::sort(threads.begin(), threads.end(), [](const Thread& a, const Thread& b) {
    return std::pair<TimeStamp, const std::string&>{a.first_time, a.root_id} <
           std::pair<TimeStamp, const std::string&>{b.first_time, b.root_id};
  });
  return threads;
}

// Bias-correction filters. nullopt disables the corresponding filter; the
// defaults follow the 2-year rule (730 days).
struct CleaningPolicy {
  static constexpr TimeStamp kTwoYears = 63'072'000;

  std::optional<TimeStamp> max_thread_duration = kTwoYears;
  std::optional<TimeStamp> start_cutoff = kTwoYears;
  bool drop_inconsistent = true;
  bool drop_incomplete = true;
  // When > 0 and drop_incomplete is on, threads touching the first/last
  // `edge_guard` seconds of the window also count as incomplete.
  TimeStamp edge_guard = 0;
};

struct TimeWindow {
  TimeStamp start{};
  TimeStamp end{};
};

struct RemovalReport {
  std::size_t inconsistent = 0;
  std::size_t incomplete = 0;
  std::size_t too_long = 0;
  std::size_t late_start = 0;
  std::size_t kept = 0;

  std::size_t removed() const { return inconsistent + incomplete + too_long + late_start; }
};

struct CleanResult {
  std::vector<Thread> threads;
  RemovalReport report;
};

// Removes threads failing any enabled filter. A thread failing several
// filters is reported once, under the first reason in the order
// inconsistent, incomplete, too_long, late_start.
inline CleanResult clean(std::vector<Thread> threads, std::span<const Message> messages,
                         const CleaningPolicy& policy, TimeWindow window) {
  for (const auto& t : threads)
    for (auto m : t.members)
      if (messages[m].time < window.start || messages[m].time > window.end)
        throw Error("collection window does not cover message '" + messages[m].id + "'");
  CleanResult result;
  for (auto& t : threads) {
    bool incomplete_edges =
        policy.edge_guard > 0 && (t.first_time < window.start + policy.edge_guard ||
                                  t.last_time > window.end - policy.edge_guard);
    t.within_duration =
        !policy.max_thread_duration || t.span() <= *policy.max_thread_duration;
    t.within_start_cutoff =
        !policy.start_cutoff || t.first_time <= window.end - *policy.start_cutoff;
    if (policy.drop_inconsistent && !t.consistent)
      ++result.report.inconsistent;
    else if (policy.drop_incomplete && (!t.complete || incomplete_edges))
      ++result.report.incomplete;
    else if (!t.within_duration)
      ++result.report.too_long;
    else if (!t.within_start_cutoff)
      ++result.report.late_start;
    else {
      ++result.report.kept;
      result.threads.push_back(std::move(t));
    }
  }
  return result;
}

// The stream plus its thread partition, with the part -> thread mapping and
// the tallies of messages that produce no link.
struct StreamBundle {
  std::shared_ptr<const LinkStream> stream;
  StreamPartition partition;
  std::vector<std::uint32_t> part_thread;  // part id -> index into the thread list
  std::size_t root_messages = 0;
  std::size_t self_replies = 0;
  std::size_t dangling_replies = 0;
};

// One event per non-root reply: (t(m), a(m), a(p(m))), labeled with its
// thread. Self-replies and replies to missing parents yield no event; threads
// with no event (single-message ones in particular) are excluded from the
// partition but stay available for message-level statistics.
inline StreamBundle to_stream_and_partition(std::span<const Thread> threads,
                                            std::span<const Message> messages) {
  std::unordered_map<std::string_view, std::uint32_t> by_id;
  by_id.reserve(messages.size());
  for (std::uint32_t i = 0; i < messages.size(); ++i) by_id.emplace(messages[i].id, i);

  StreamBundle bundle;
  auto table = std::make_shared<NodeTable>();
  std::vector<LinkEvent> events;
  std::vector<std::uint32_t> labels;
  for (std::uint32_t ti = 0; ti < threads.size(); ++ti) {
    bool any = false;
    for (auto mi : threads[ti].members) {
      const Message& m = messages[mi];
      if (m.is_root()) {
        ++bundle.root_messages;
        continue;
      }
      auto pit = by_id.find(m.parent);
      if (pit == by_id.end()) {
        ++bundle.dangling_replies;
        continue;
      }
      const Message& parent = messages[pit->second];
      if (m.author == parent.author) {
        ++bundle.self_replies;
        continue;
      }
      NodeId child = table->intern(m.author);
      NodeId replied_to = table->intern(parent.author);
      events.push_back(make_event(m.time, child, replied_to));
      labels.push_back(ti);
      any = true;
    }
    if (any) bundle.part_thread.push_back(ti);
  }
  if (events.empty()) throw Error("no link events: every retained thread is eventless");

  // Sort events and labels together; alpha/omega are the min/max event time.
  std::vector<std::uint32_t> order(events.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::pair{events[a], labels[a]} < std::pair{events[b], labels[b]};
  });
  std::vector<LinkEvent> sorted_events(events.size());
  std::vector<std::uint32_t> sorted_labels(events.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    sorted_events[i] = events[order[i]];
    sorted_labels[i] = labels[order[i]];
  }
  TimeStamp alpha = sorted_events.front().t;
  TimeStamp omega = sorted_events.back().t;
  bundle.stream = std::make_shared<const LinkStream>(
      make_stream(alpha, omega, std::move(sorted_events), {}, std::move(table)));
  bundle.partition = partition_by_labels(bundle.stream, sorted_labels);
  return bundle;
}

}  // namespace lks
