#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <unordered_set>

#include "linkstream/ingest.hpp"
#include "linkstream/partition.hpp"
#include "linkstream/stream.hpp"

namespace lks {

// Per-thread basics: message count from the ingest thread, the rest from the
// part. Duration is the event span omega_i - alpha_i.
struct ThreadStats {
  std::uint32_t part{};
  std::string root_id;
  std::size_t n_messages{};
  std::size_t n_events{};
  std::size_t n_authors{};
  std::size_t n_distinct_pairs{};
  TimeStamp duration{};
};

inline std::vector<ThreadStats> thread_stats(const StreamPartition& partition,
                                             std::span<const Thread> threads,
                                             std::span<const std::uint32_t> part_thread) {
  if (part_thread.size() != partition.size())
    throw Error("part -> thread mapping does not match the partition");
  std::vector<ThreadStats> out;
  out.reserve(partition.size());
  std::unordered_set<std::uint64_t> pairs;
  for (std::uint32_t i = 0; i < partition.size(); ++i) {
    const auto& part = partition.parts[i];
    const auto& thread = threads[part_thread[i]];
    pairs.clear();
    for (auto e : part.events) {
      const auto& ev = partition.stream().events[e];
      pairs.insert(pair_key(ev.u, ev.v));
    }
    out.push_back({i, thread.root_id, thread.size(), part.event_count(), part.nodes.size(),
                   pairs.size(), part.duration()});
  }
  return out;
}

// Complementary cumulative distribution: P(X >= x) over the distinct sample
// values. Non-increasing, starts at 1.
struct CCDF {
  std::vector<std::pair<double, double>> points;  // (value, fraction >= value)
};

inline CCDF ccdf(std::span<const double> samples) {
  if (samples.empty()) throw Error("ccdf of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  CCDF out;
  std::size_t n = sorted.size();
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    out.points.emplace_back(sorted[i], double(n - i) / double(n));
    i = j;
  }
  return out;
}

// Scatter export plus Pearson and Spearman coefficients. Coefficients are
// omitted (with the reason) when undefined.
struct CorrelationTable {
  std::vector<std::pair<double, double>> points;
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::string omitted_reason;
};

namespace detail {

inline std::optional<double> pearson_of(std::span<const double> x, std::span<const double> y,
                                        std::string& why) {
  std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) {
    why = "zero variance";
    return std::nullopt;
  }
  return sxy / std::sqrt(sxx * syy);
}

// Average ranks for ties.
inline std::vector<double> ranks_of(std::span<const double> v) {
  std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && v[order[j]] == v[order[i]]) ++j;
    double rank = (double(i) + double(j - 1)) / 2.0 + 1.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

}  // namespace detail

inline CorrelationTable correlation_table(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("correlation series differ in length");
  CorrelationTable out;
  out.points.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.points.emplace_back(x[i], y[i]);
  if (x.size() < 2) {
    out.omitted_reason = "fewer than 2 points";
    return out;
  }
  std::string why;
  out.pearson = detail::pearson_of(x, y, why);
  auto rx = detail::ranks_of(x);
  auto ry = detail::ranks_of(y);
  std::string why_rank;
  out.spearman = detail::pearson_of(rx, ry, why_rank);
  if (!out.pearson || !out.spearman) out.omitted_reason = why.empty() ? why_rank : why;
  return out;
}

// Pools the inter-contact gaps of every linked pair. By default the
// artificial alpha/omega padding gaps are excluded: they measure where the
// observation window sits, not behavior.
inline CCDF intercontact_distribution(const LinkStream& stream,
                                      bool include_boundary_gaps = false) {
  std::unordered_map<std::uint64_t, std::vector<TimeStamp>> by_pair;
  for (const auto& e : stream.events) by_pair[pair_key(e.u, e.v)].push_back(e.t);
  if (by_pair.empty()) throw Error("no linked pairs in the stream");
  std::vector<double> gaps;
  for (const auto& [key, times] : by_pair) {
    for (std::size_t i = 1; i < times.size(); ++i)
      gaps.push_back(double(times[i] - times[i - 1]));
    if (include_boundary_gaps) {
      gaps.push_back(double(times.front() - stream.alpha));
      gaps.push_back(double(stream.omega - times.back()));
    }
  }
  if (gaps.empty())
    throw Error("no interior inter-contact gaps (every linked pair has a single event)");
  return ccdf(gaps);
}

}  // namespace lks
