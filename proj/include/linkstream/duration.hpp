#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "linkstream/types.hpp"

namespace lks {

// Durations are plain seconds or suffixed: s, m (minute), h, d, w, y with
// y = 365 d. "30d" stands in for a month.
inline TimeStamp parse_duration(std::string_view text) {
  if (text.empty()) throw Error("empty duration");
  TimeStamp unit = 1;
  std::string_view digits = text;
  switch (text.back()) {
    case 's': unit = 1; digits.remove_suffix(1); break;
    case 'm': unit = 60; digits.remove_suffix(1); break;
    case 'h': unit = 3'600; digits.remove_suffix(1); break;
    case 'd': unit = 86'400; digits.remove_suffix(1); break;
    case 'w': unit = 604'800; digits.remove_suffix(1); break;
    case 'y': unit = 31'536'000; digits.remove_suffix(1); break;
    default: break;
  }
  TimeStamp value{};
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || value < 0)
    throw Error("bad duration '" + std::string(text) + "'");
  return value * unit;
}

// A window length with the label it was given on the command line; the label
// names per-delta output files.
struct DeltaSpec {
  std::string label;
  TimeStamp seconds{};
};

inline std::vector<DeltaSpec> parse_delta_list(std::string_view list) {
  std::vector<DeltaSpec> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t pos = list.find(',', start);
    std::string_view token =
        list.substr(start, pos == std::string_view::npos ? pos : pos - start);
    if (!token.empty()) out.push_back({std::string(token), parse_duration(token)});
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (out.empty()) throw Error("empty delta list");
  return out;
}

}  // namespace lks
