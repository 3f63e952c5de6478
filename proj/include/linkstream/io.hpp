#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>

#include "linkstream/graph.hpp"
#include "linkstream/relations.hpp"
#include "linkstream/stats.hpp"
#include "linkstream/types.hpp"

namespace lks {

// Shortest round-trip decimal form, deterministic for a given build.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string file_hash_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' line ends on every platform
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

inline void write_edge_list_csv(const std::filesystem::path& path, const StaticGraph& g) {
  auto out = open_out(path);
  out << "i,j,weight\n";
  for (const auto& e : g.edges) out << e.u << ',' << e.v << ',' << e.weight << '\n';
}

inline void write_quotient_csv(const std::filesystem::path& path, const QuotientStream& q) {
  auto out = open_out(path);
  out << "t,i,j,multiplicity\n";
  for (const auto& e : q.events)
    out << e.t << ',' << e.i << ',' << e.j << ',' << e.multiplicity << '\n';
}

inline void write_ccdf_csv(const std::filesystem::path& path, const CCDF& c) {
  auto out = open_out(path);
  out << "value,ccdf\n";
  for (const auto& [x, frac] : c.points)
    out << format_double(x) << ',' << format_double(frac) << '\n';
}

inline void write_scatter_csv(const std::filesystem::path& path, std::string_view x_name,
                              std::string_view y_name,
                              std::span<const std::pair<double, double>> points) {
  auto out = open_out(path);
  out << x_name << ',' << y_name << '\n';
  for (const auto& [x, y] : points) out << format_double(x) << ',' << format_double(y) << '\n';
}

inline void write_thread_stats_csv(const std::filesystem::path& path,
                                   std::span<const ThreadStats> stats) {
  auto out = open_out(path);
  out << "part,root_id,n_messages,n_events,n_authors,n_distinct_pairs,duration\n";
  for (const auto& s : stats)
    out << s.part << ',' << s.root_id << ',' << s.n_messages << ',' << s.n_events << ','
        << s.n_authors << ',' << s.n_distinct_pairs << ',' << s.duration << '\n';
}

}  // namespace lks
