#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lks {

// Integer seconds since the UTC epoch. int64 covers far more than the
// required +/- 1e10 range.
using TimeStamp = std::int64_t;

// Dense node index, 0..|V|-1 within one stream's node table.
using NodeId = std::uint32_t;

using int128 = __int128;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : Error {
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

// An undirected timestamped link. Stored canonically with u < v, so
// (t,u,v) and (t,v,u) compare equal. Self-links are rejected at
// construction time.
struct LinkEvent {
  TimeStamp t{};
  NodeId u{};
  NodeId v{};

  friend auto operator<=>(const LinkEvent&, const LinkEvent&) = default;
};

inline LinkEvent make_event(TimeStamp t, NodeId a, NodeId b) {
  if (a == b) throw Error("self-link (" + std::to_string(a) + ") is not a valid event");
  return a < b ? LinkEvent{t, a, b} : LinkEvent{t, b, a};
}

inline std::uint64_t pair_key(NodeId u, NodeId v) {
  return (std::uint64_t(u) << 32) | std::uint64_t(v);
}

// Bijective label <-> dense id mapping. Ids are assigned in interning order.
class NodeTable {
 public:
  NodeId intern(std::string_view label) {
    auto it = index_.find(std::string(label));
    if (it != index_.end()) return it->second;
    NodeId id = static_cast<NodeId>(labels_.size());
    labels_.emplace_back(label);
    index_.emplace(labels_.back(), id);
    return id;
  }

  std::optional<NodeId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& label(NodeId id) const { return labels_.at(id); }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

}  // namespace lks
