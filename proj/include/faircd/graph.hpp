#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "faircd/common.hpp"

namespace faircd {

/// Undirected, unweighted simple graph over dense node indices [0, n).
///
/// Immutable once built. Neighbor lists are sorted, so `has_edge` is a
/// binary search and iteration order is deterministic.
class Graph {
 public:
  Graph() = default;

  /// Builds from an arbitrary pair list. Self-loops and duplicates are
  /// dropped; the counts are available through dropped_self_loops() and
  /// dropped_duplicates().
  Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> pairs) : adj_(n) {
    std::vector<std::pair<NodeId, NodeId>> es;
    es.reserve(pairs.size());
    for (auto [u, v] : pairs) {
      if (u >= n || v >= n) {
        throw ConfigError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                          ") references a node outside [0, " + std::to_string(n) + ")");
      }
      if (u == v) {
        ++self_loops_;
        continue;
      }
      es.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(es.begin(), es.end());
    const auto last = std::unique(es.begin(), es.end());
    duplicates_ = static_cast<std::size_t>(es.end() - last);
    es.erase(last, es.end());
    for (auto [u, v] : es) {
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    edges_ = std::move(es);
  }

  std::size_t num_nodes() const { return adj_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  /// Canonical edge list: (u, v) with u < v, sorted lexicographically.
  std::span<const std::pair<NodeId, NodeId>> edges() const { return edges_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    check(u);
    return adj_[u];
  }

  std::size_t degree(NodeId u) const {
    check(u);
    return adj_[u].size();
  }

  bool has_edge(NodeId u, NodeId v) const {
    check(u);
    check(v);
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  }

  std::size_t dropped_self_loops() const { return self_loops_; }
  std::size_t dropped_duplicates() const { return duplicates_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adj_.size() == b.adj_.size() && a.edges_ == b.edges_;
  }

 private:
  void check(NodeId u) const {
    if (u >= adj_.size()) {
      throw ConfigError("node index " + std::to_string(u) + " out of range [0, " +
                        std::to_string(adj_.size()) + ")");
    }
  }

  std::vector<std::vector<NodeId>> adj_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::size_t self_loops_ = 0;
  std::size_t duplicates_ = 0;
};

inline std::size_t degree(const Graph& g, NodeId i) { return g.degree(i); }

enum class IdMode {
  raw,    // tokens are non-negative integers used directly as indices
  remap,  // arbitrary tokens, indexed in order of first appearance
};

/// External token for every dense index, and the reverse lookup.
struct NodeMap {
  std::vector<std::string> tokens;
  std::unordered_map<std::string, NodeId> index;

  NodeId intern(std::string_view tok) {
    auto [it, inserted] = index.try_emplace(std::string(tok), static_cast<NodeId>(tokens.size()));
    if (inserted) tokens.emplace_back(tok);
    return it->second;
  }

  static NodeMap identity(std::size_t n) {
    NodeMap m;
    m.tokens.reserve(n);
    for (std::size_t i = 0; i < n; ++i) m.intern(std::to_string(i));
    return m;
  }
};

struct LoadedGraph {
  Graph graph;
  NodeMap mapping;
};

/// Reads a whitespace-separated edge list. Lines starting with '#' and blank
/// lines are skipped; extra columns beyond the first two are ignored.
///
/// In raw mode the node count is max index + 1, so unlisted indices become
/// isolated nodes.
inline LoadedGraph load_edge_list(std::istream& in, IdMode mode = IdMode::raw) {
  LoadedGraph out;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t max_id = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto toks = detail::split_ws(t);
    if (toks.size() < 2) {
      throw ParseError("line " + std::to_string(lineno) + ": expected two node tokens, got '" +
                       std::string(t) + "'");
    }
    NodeId u, v;
    if (mode == IdMode::raw) {
      std::uint64_t a, b;
      if (!detail::parse_uint(toks[0], a) || !detail::parse_uint(toks[1], b) ||
          a >= std::numeric_limits<NodeId>::max() || b >= std::numeric_limits<NodeId>::max()) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": node ids must be non-negative integers (use remap mode for labels)");
      }
      u = static_cast<NodeId>(a);
      v = static_cast<NodeId>(b);
      max_id = std::max({max_id, a, b});
    } else {
      u = out.mapping.intern(toks[0]);
      v = out.mapping.intern(toks[1]);
    }
    any = true;
    pairs.emplace_back(u, v);
  }
  if (!any) throw ParseError("edge list is empty");
  const std::size_t n = mode == IdMode::raw ? static_cast<std::size_t>(max_id) + 1
                                            : out.mapping.tokens.size();
  if (mode == IdMode::raw) out.mapping = NodeMap::identity(n);
  out.graph = Graph(n, pairs);
  return out;
}

/// Writes the canonical edge list (one "u v" per line).
inline void write_edge_list(std::ostream& os, const Graph& g) {
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

/// Writes the `token,index` mapping CSV.
inline void write_node_map(std::ostream& os, const NodeMap& m) {
  os << "token,index\n";
  for (std::size_t i = 0; i < m.tokens.size(); ++i) os << m.tokens[i] << ',' << i << '\n';
}

}  // namespace faircd
