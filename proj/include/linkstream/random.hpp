#pragma once

#include <random>

#include "linkstream/types.hpp"

namespace lks {

// mt19937_64 output is pinned by the standard, and these helpers avoid
// std::uniform_int_distribution (whose draws are implementation-defined), so
// a fixed seed yields byte-identical results on any platform.

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw Error("uniform_below(0)");
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Inclusive range.
inline std::int64_t uniform_range(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw Error("uniform_range with lo > hi");
  return lo + static_cast<std::int64_t>(
                  uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

// k distinct values out of 0..n-1, in draw order.
inline std::vector<std::uint32_t> sample_distinct(std::mt19937_64& rng, std::uint32_t n,
                                                  std::uint32_t k) {
  if (k > n) throw Error("cannot sample " + std::to_string(k) + " distinct values from " +
                         std::to_string(n));
  std::vector<std::uint32_t> out;
  out.reserve(k);
  if (k * 2 >= n) {
    std::vector<std::uint32_t> all(n);
    for (std::uint32_t i = 0; i < n; ++i) all[i] = i;
    for (std::uint32_t t = 0; t < k; ++t) {
      std::uint32_t pick = t + static_cast<std::uint32_t>(uniform_below(rng, n - t));
      std::swap(all[t], all[pick]);
      out.push_back(all[t]);
    }
  } else {
    std::unordered_map<std::uint32_t, bool> seen;
    while (out.size() < k) {
      auto x = static_cast<std::uint32_t>(uniform_below(rng, n));
      if (seen.emplace(x, true).second) out.push_back(x);
    }
  }
  return out;
}

}  // namespace lks
