#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <random>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "linkstream/graph.hpp"
#include "linkstream/partition.hpp"
#include "linkstream/stream.hpp"

namespace lks {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// A window length, in seconds.
struct Delta {
  TimeStamp seconds{0};
};

// Exact rational density in [0, 1]. Degenerate cases (undefined denominator)
// carry a reason string instead of a number. Floats appear only at report
// boundaries via value().
class DensityValue {
 public:
  DensityValue() = default;

  static DensityValue exact(Rational r, bool sampled = false) {
    DensityValue d;
    d.degenerate_ = false;
    d.ratio_ = std::move(r);
    d.sampled_ = sampled;
    return d;
  }

  static DensityValue from_ratio(int128 num, int128 den, bool sampled = false) {
    return exact(Rational(BigInt(num), BigInt(den)), sampled);
  }

  static DensityValue degenerate(std::string reason) {
    DensityValue d;
    d.degenerate_ = true;
    d.reason_ = std::move(reason);
    return d;
  }

  bool is_degenerate() const { return degenerate_; }
  const std::string& reason() const { return reason_; }
  bool sampled() const { return sampled_; }

  const Rational& ratio() const {
    if (degenerate_) throw Error("degenerate density has no value: " + reason_);
    return ratio_;
  }

  BigInt numerator() const { return boost::multiprecision::numerator(ratio()); }
  BigInt denominator() const { return boost::multiprecision::denominator(ratio()); }
  double value() const { return ratio().convert_to<double>(); }

  friend bool operator==(const DensityValue& a, const DensityValue& b) {
    if (a.degenerate_ || b.degenerate_) return a.degenerate_ == b.degenerate_;
    return a.ratio_ == b.ratio_;
  }

 private:
  bool degenerate_ = true;
  std::string reason_ = "uninitialized";
  Rational ratio_;
  bool sampled_ = false;
};

// 2|E| / (|V| (|V|-1)): the probability that two randomly chosen vertices are
// linked.
inline DensityValue graph_density(const StaticGraph& g) {
  if (g.node_count() < 2) return DensityValue::degenerate("fewer than 2 nodes");
  int128 n = static_cast<int128>(g.node_count());
  return DensityValue::from_ratio(2 * static_cast<int128>(g.edge_count()), n * (n - 1));
}

// Sum over the inter-contact gaps of `times` (padded with [lo, hi]) of
// max(0, gap - delta).
inline int128 clipped_gap_sum(std::span<const TimeStamp> times, TimeStamp lo, TimeStamp hi,
                              TimeStamp delta) {
  int128 total = 0;
  TimeStamp prev = lo;
  for (TimeStamp t : times) {
    if (t - prev > delta) total += t - prev - delta;
    prev = t;
  }
  if (hi - prev > delta) total += hi - prev - delta;
  return total;
}

// Shared pre-computation for evaluating delta-density of one stream at many
// window lengths. The pooled-gap trick: a window of length d misses a pair
// during max(0, gap - d) start positions, so the numerator is a suffix sum
// over the sorted pool of gaps plus a closed form for the never-linked pairs.
class DeltaDensityEvaluator {
 public:
  explicit DeltaDensityEvaluator(const LinkStream& s)
      : n_(s.nodes.size()), dur_(s.duration()) {
    std::unordered_map<std::uint64_t, std::vector<TimeStamp>> by_pair;
    for (const auto& e : s.events) by_pair[pair_key(e.u, e.v)].push_back(e.t);
    linked_pairs_ = by_pair.size();
    gaps_.reserve(s.events.size() + 2 * linked_pairs_);
    for (const auto& [key, times] : by_pair) {
      TimeStamp prev = s.alpha;
      for (TimeStamp t : times) {
        gaps_.push_back(t - prev);
        prev = t;
      }
      gaps_.push_back(s.omega - prev);
    }
    std::sort(gaps_.begin(), gaps_.end());
    suffix_sum_.resize(gaps_.size() + 1);
    suffix_sum_[gaps_.size()] = 0;
    for (std::size_t i = gaps_.size(); i-- > 0;)
      suffix_sum_[i] = suffix_sum_[i + 1] + gaps_[i];
  }

  DensityValue at(Delta d) const {
    if (d.seconds < 0) throw Error("delta must be non-negative");
    if (n_ < 2) return DensityValue::degenerate("fewer than 2 nodes");
    int128 n = static_cast<int128>(n_);
    int128 all_pairs = n * (n - 1) / 2;
    // At delta >= duration the window always spans the whole stream, and the
    // value is the density of the induced graph taken over the full node set.
    if (d.seconds >= dur_)
      return DensityValue::from_ratio(2 * static_cast<int128>(linked_pairs_), n * (n - 1));
    auto it = std::upper_bound(gaps_.begin(), gaps_.end(), d.seconds);
    std::size_t idx = static_cast<std::size_t>(it - gaps_.begin());
    int128 tail_count = static_cast<int128>(gaps_.size() - idx);
    int128 uncovered = suffix_sum_[idx] - tail_count * d.seconds;
    uncovered += (all_pairs - static_cast<int128>(linked_pairs_)) *
                 static_cast<int128>(dur_ - d.seconds);
    int128 den = all_pairs * static_cast<int128>(dur_ - d.seconds);
    return DensityValue::exact(1 - Rational(BigInt(uncovered), BigInt(den)));
  }

 private:
  std::size_t n_;
  TimeStamp dur_;
  std::size_t linked_pairs_ = 0;
  std::vector<TimeStamp> gaps_;   // all gaps of linked pairs, sorted
  std::vector<int128> suffix_sum_;
};

inline DensityValue delta_density(const LinkStream& s, Delta d) {
  return DeltaDensityEvaluator(s).at(d);
}

inline std::vector<std::pair<TimeStamp, DensityValue>> delta_density_profile(
    const LinkStream& s, std::span<const TimeStamp> deltas) {
  DeltaDensityEvaluator eval(s);
  std::vector<std::pair<TimeStamp, DensityValue>> out;
  out.reserve(deltas.size());
  for (TimeStamp d : deltas) out.emplace_back(d, eval.at(Delta{d}));
  return out;
}

namespace detail {

inline std::unordered_map<NodeId, std::size_t> community_index(
    const StaticGraph& g, std::span<const std::vector<NodeId>> communities) {
  std::unordered_map<NodeId, std::size_t> of;
  of.reserve(g.node_count());
  for (std::size_t i = 0; i < communities.size(); ++i)
    for (NodeId v : communities[i]) {
      if (!g.has_node(v))
        throw Error("community vertex " + std::to_string(v) + " is not in the graph");
      if (!of.emplace(v, i).second)
        throw Error("vertex " + std::to_string(v) + " appears in two communities");
    }
  if (of.size() != g.node_count())
    throw Error("communities do not cover every vertex");
  return of;
}

}  // namespace detail

// Probability that two random nodes of the same community are linked:
// 2 sum_i |E(C_i)| / sum_i |C_i| (|C_i|-1).
inline DensityValue intra_community_density(const StaticGraph& g,
                                            std::span<const std::vector<NodeId>> communities) {
  auto of = detail::community_index(g, communities);
  int128 den = 0;
  for (const auto& c : communities) {
    int128 sz = static_cast<int128>(c.size());
    den += sz * (sz - 1);
  }
  if (den == 0) return DensityValue::degenerate("all communities are singletons");
  int128 intra = 0;
  for (const auto& e : g.edges)
    if (of.at(e.u) == of.at(e.v)) ++intra;
  return DensityValue::from_ratio(2 * intra, den);
}

// delta^inter(C_i) = (1/|C|) sum_{j != i} cross(C_i, C_j) / (|C_i| |C_j|).
// The 1/|C| normalization (not 1/(|C|-1)) is deliberate.
inline DensityValue inter_community_density(const StaticGraph& g,
                                            std::span<const std::vector<NodeId>> communities,
                                            std::size_t i) {
  if (i >= communities.size()) throw Error("community index out of range");
  auto of = detail::community_index(g, communities);
  std::unordered_map<std::size_t, std::uint64_t> cross;
  for (const auto& e : g.edges) {
    std::size_t cu = of.at(e.u), cv = of.at(e.v);
    if (cu == cv) continue;
    if (cu == i) ++cross[cv];
    else if (cv == i) ++cross[cu];
  }
  Rational sum = 0;
  int128 ci = static_cast<int128>(communities[i].size());
  for (const auto& [j, count] : cross) {
    int128 cj = static_cast<int128>(communities[j].size());
    sum += Rational(BigInt(static_cast<int128>(count)), BigInt(ci * cj));
  }
  sum /= static_cast<long>(communities.size());
  return DensityValue::exact(std::move(sum));
}

namespace detail {

// Per-part (pair -> event times) grouping; times ascend because parent events
// are sorted by time.
struct PartPairs {
  std::vector<std::pair<std::uint64_t, std::vector<TimeStamp>>> pairs;
};

inline PartPairs group_part_pairs(const StreamPartition& p, const SubStream& part) {
  std::unordered_map<std::uint64_t, std::vector<TimeStamp>> by_pair;
  for (auto e : part.events) {
    const auto& ev = p.stream().events[e];
    by_pair[pair_key(ev.u, ev.v)].push_back(ev.t);
  }
  PartPairs out;
  out.pairs.assign(by_pair.begin(), by_pair.end());
  return out;
}

struct PartTerms {
  int128 clipped = 0;     // sum over pairs of V_i of clipped gaps
  int128 pair_slots = 0;  // |V_i| (|V_i|-1)
  std::size_t linked = 0; // pairs with at least one event
};

inline PartTerms part_terms(const SubStream& part, const PartPairs& pairs, TimeStamp delta) {
  PartTerms t;
  int128 n = static_cast<int128>(part.nodes.size());
  t.pair_slots = n * (n - 1);
  t.linked = pairs.pairs.size();
  if (part.duration() <= delta) return t;  // every gap clips to zero
  for (const auto& [key, times] : pairs.pairs)
    t.clipped += clipped_gap_sum(times, part.alpha, part.omega, delta);
  int128 empty = t.pair_slots / 2 - static_cast<int128>(t.linked);
  t.clipped += empty * static_cast<int128>(part.duration() - delta);
  return t;
}

}  // namespace detail

// Evaluates per-part and aggregated intra-thread delta-density. Each part is
// padded with its own [alpha_i, omega_i].
class IntraThreadEvaluator {
 public:
  explicit IntraThreadEvaluator(const StreamPartition& p) : p_(&p) {
    pairs_.reserve(p.size());
    for (const auto& part : p.parts) pairs_.push_back(detail::group_part_pairs(p, part));
  }

  // delta-density of part i treated as a stand-alone stream over
  // [alpha_i, omega_i] and V_i. Zero-duration parts are degenerate.
  DensityValue per_part(std::size_t i, Delta d) const {
    const auto& part = p_->parts.at(i);
    if (part.nodes.size() < 2) return DensityValue::degenerate("fewer than 2 nodes");
    if (part.duration() == 0) return DensityValue::degenerate("zero-duration part");
    int128 n = static_cast<int128>(part.nodes.size());
    if (d.seconds >= part.duration())
      return DensityValue::from_ratio(2 * static_cast<int128>(pairs_[i].pairs.size()),
                                      n * (n - 1));
    auto t = detail::part_terms(part, pairs_[i], d.seconds);
    int128 den = t.pair_slots * static_cast<int128>(part.duration() - d.seconds);
    return DensityValue::exact(1 - Rational(BigInt(2 * t.clipped), BigInt(den)));
  }

  // Aggregated ratio over all parts; parts whose duration is within delta
  // contribute zero to both sums.
  DensityValue aggregate(Delta d) const {
    int128 num = 0;
    int128 den = 0;
    for (std::size_t i = 0; i < p_->size(); ++i) {
      const auto& part = p_->parts[i];
      if (part.duration() <= d.seconds) continue;
      auto t = detail::part_terms(part, pairs_[i], d.seconds);
      num += 2 * t.clipped;
      den += t.pair_slots * static_cast<int128>(part.duration() - d.seconds);
    }
    if (den == 0) return DensityValue::degenerate("no part longer than delta");
    return DensityValue::exact(1 - Rational(BigInt(num), BigInt(den)));
  }

 private:
  const StreamPartition* p_;
  std::vector<detail::PartPairs> pairs_;
};

inline DensityValue intra_thread_delta_density(const StreamPartition& p, Delta d) {
  return IntraThreadEvaluator(p).aggregate(d);
}

inline DensityValue per_thread_delta_density(const StreamPartition& p, std::size_t part,
                                             Delta d) {
  return IntraThreadEvaluator(p).per_part(part, d);
}

// L_ij: the sub-stream over T_ij = [min(a_i,a_j), max(w_i,w_j)] and
// V_ij = V_i u V_j carrying the links between those nodes that belong to
// neither part.
inline LinkStream inter_thread_substream(const StreamPartition& p, std::size_t i,
                                         std::size_t j) {
  if (i == j) throw Error("inter-thread substream requires two distinct parts");
  const auto& pi = p.parts.at(i);
  const auto& pj = p.parts.at(j);
  TimeStamp lo = std::min(pi.alpha, pj.alpha);
  TimeStamp hi = std::max(pi.omega, pj.omega);
  std::vector<NodeId> nodes;
  nodes.reserve(pi.nodes.size() + pj.nodes.size());
  std::set_union(pi.nodes.begin(), pi.nodes.end(), pj.nodes.begin(), pj.nodes.end(),
                 std::back_inserter(nodes));
  auto in = [&](NodeId n) { return std::binary_search(nodes.begin(), nodes.end(), n); };
  const auto& events = p.stream().events;
  auto first = std::lower_bound(events.begin(), events.end(), lo,
                                [](const LinkEvent& e, TimeStamp t) { return e.t < t; });
  std::vector<LinkEvent> kept;
  for (auto it = first; it != events.end() && it->t <= hi; ++it) {
    auto e = static_cast<std::uint32_t>(it - events.begin());
    if (p.part_of[e] == i || p.part_of[e] == j) continue;
    if (in(it->u) && in(it->v)) kept.push_back(*it);
  }
  return make_stream(lo, hi, std::move(kept), std::move(nodes), p.stream().labels);
}

// Optional restriction of the counterpart sum to `size` uniformly drawn
// threads; size 0 (or >= k-1) means exhaustive.
struct CounterpartSample {
  std::size_t size = 0;
  std::uint64_t seed = 0;
};

// Fast path for inter-thread delta-density: a global (pair -> (time, part))
// index avoids materializing L_ij for every counterpart. Evaluation methods
// are const and safe to call from several threads; pass one Workspace per
// thread to reuse scratch buffers.
class InterThreadEvaluator {
 public:
  struct Workspace {
    std::vector<NodeId> merged;
    std::vector<TimeStamp> times;
  };

  explicit InterThreadEvaluator(const StreamPartition& p) : p_(&p) {
    const auto& events = p.stream().events;
    for (std::uint32_t e = 0; e < events.size(); ++e)
      pair_events_[pair_key(events[e].u, events[e].v)].emplace_back(events[e].t, p.part_of[e]);
  }

  // delta_density(L_ij) without building the substream.
  Rational pairwise(std::size_t i, std::size_t j, Delta d, Workspace& ws) const {
    if (i == j) throw Error("inter-thread density requires two distinct parts");
    const auto& pi = p_->parts.at(i);
    const auto& pj = p_->parts.at(j);
    TimeStamp lo = std::min(pi.alpha, pj.alpha);
    TimeStamp hi = std::max(pi.omega, pj.omega);
    TimeStamp dur = hi - lo;
    ws.merged.clear();
    std::set_union(pi.nodes.begin(), pi.nodes.end(), pj.nodes.begin(), pj.nodes.end(),
                   std::back_inserter(ws.merged));
    int128 n = static_cast<int128>(ws.merged.size());
    int128 all_pairs = n * (n - 1) / 2;
    std::uint32_t pa = static_cast<std::uint32_t>(i);
    std::uint32_t pb = static_cast<std::uint32_t>(j);
    if (d.seconds >= dur) {
      int128 linked = 0;
      for_each_pair_window(ws, lo, hi, pa, pb, [&](std::span<const TimeStamp>) { ++linked; });
      return Rational(BigInt(2 * linked), BigInt(n * (n - 1)));
    }
    int128 uncovered = 0;
    int128 linked = 0;
    for_each_pair_window(ws, lo, hi, pa, pb, [&](std::span<const TimeStamp> times) {
      ++linked;
      uncovered += clipped_gap_sum(times, lo, hi, d.seconds);
    });
    uncovered += (all_pairs - linked) * static_cast<int128>(dur - d.seconds);
    int128 den = all_pairs * static_cast<int128>(dur - d.seconds);
    return 1 - Rational(BigInt(uncovered), BigInt(den));
  }

  Rational pairwise(std::size_t i, std::size_t j, Delta d) const {
    Workspace ws;
    return pairwise(i, j, d, ws);
  }

  // delta^inter(C_i) = (1/k) sum_{j != i} delta(L_ij), the sum optionally
  // estimated from a seeded uniform sample of counterparts and rescaled by
  // (k-1)/|J|.
  DensityValue density(std::size_t i, Delta d, const CounterpartSample& sample = {}) const {
    Workspace ws;
    return density(i, d, sample, ws);
  }

  DensityValue density(std::size_t i, Delta d, const CounterpartSample& sample,
                       Workspace& ws) const {
    std::size_t k = p_->size();
    if (k < 2) throw Error("inter-thread density requires at least 2 parts");
    if (i >= k) throw Error("part index out of range");
    Rational sum = 0;
    std::size_t used = 0;
    bool sampled = sample.size > 0 && sample.size < k - 1;
    if (!sampled) {
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i) continue;
        sum += pairwise(i, j, d, ws);
        ++used;
      }
    } else {
      for (std::size_t j : sample_counterparts(k, i, sample)) {
        sum += pairwise(i, j, d, ws);
        ++used;
      }
    }
    sum *= Rational(BigInt(static_cast<long long>(k - 1)),
                    BigInt(static_cast<long long>(k)) * BigInt(static_cast<long long>(used)));
    return DensityValue::exact(std::move(sum), sampled);
  }

 private:
  template <typename Fn>
  void for_each_pair_window(Workspace& ws, TimeStamp lo, TimeStamp hi, std::uint32_t skip_a,
                            std::uint32_t skip_b, Fn&& fn) const {
    for (std::size_t x = 0; x < ws.merged.size(); ++x) {
      for (std::size_t y = x + 1; y < ws.merged.size(); ++y) {
        auto it = pair_events_.find(pair_key(ws.merged[x], ws.merged[y]));
        if (it == pair_events_.end()) continue;
        const auto& list = it->second;
        auto first = std::lower_bound(list.begin(), list.end(), lo,
                                      [](const auto& a, TimeStamp t) { return a.first < t; });
        ws.times.clear();
        for (auto e = first; e != list.end() && e->first <= hi; ++e)
          if (e->second != skip_a && e->second != skip_b) ws.times.push_back(e->first);
        if (!ws.times.empty()) fn(std::span<const TimeStamp>(ws.times));
      }
    }
  }

  static std::vector<std::size_t> sample_counterparts(std::size_t k, std::size_t i,
                                                      const CounterpartSample& sample) {
    std::seed_seq seq{static_cast<std::uint32_t>(sample.seed),
                      static_cast<std::uint32_t>(sample.seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    std::size_t want = std::min(sample.size, k - 1);
    std::vector<std::size_t> out;
    out.reserve(want);
    std::unordered_set<std::size_t> seen;
    if (want * 4 <= (k - 1) * 3) {
      // Rejection stays cheap while the sample is a minority of counterparts.
      while (out.size() < want) {
        std::uint64_t r = rng() % (k - 1);
        std::size_t j = (r >= i) ? r + 1 : r;
        if (seen.insert(j).second) out.push_back(j);
      }
    } else {
      std::vector<std::size_t> all;
      all.reserve(k - 1);
      for (std::size_t j = 0; j < k; ++j)
        if (j != i) all.push_back(j);
      for (std::size_t t = 0; t < want; ++t) {
        std::size_t pick = t + rng() % (all.size() - t);
        std::swap(all[t], all[pick]);
        out.push_back(all[t]);
      }
    }
    return out;
  }

  const StreamPartition* p_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<TimeStamp, std::uint32_t>>>
      pair_events_;
};

inline DensityValue inter_thread_delta_density(const StreamPartition& p, std::size_t i, Delta d,
                                               const CounterpartSample& sample = {}) {
  return InterThreadEvaluator(p).density(i, d, sample);
}

}  // namespace lks
