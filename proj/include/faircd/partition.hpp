#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "faircd/common.hpp"
#include "faircd/graph.hpp"

namespace faircd {

/// Hard community assignment: exactly one dense label in [0, k) per node.
///
/// Labels are renumbered in order of first appearance, so two partitions
/// that differ only by a relabeling compare equal.
class Partition {
 public:
  Partition() = default;

  /// Accepts arbitrary (possibly sparse) community ids.
  explicit Partition(std::span<const std::uint64_t> raw) { assign(raw, {}); }

  explicit Partition(std::span<const CommunityId> raw) {
    std::vector<std::uint64_t> wide(raw.begin(), raw.end());
    assign(wide, {});
  }

  Partition(std::initializer_list<CommunityId> raw)
      : Partition(std::span<const CommunityId>(raw.begin(), raw.size())) {}

  /// As above, but remembers the external name of each raw id.
  Partition(std::span<const std::uint64_t> raw, std::vector<std::string> raw_names) {
    assign(raw, std::move(raw_names));
  }

  static Partition singletons(std::size_t n) {
    std::vector<std::uint64_t> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = i;
    return Partition(raw);
  }

  static Partition one_community(std::size_t n) {
    return Partition(std::vector<std::uint64_t>(n, 0));
  }

  std::size_t num_nodes() const { return labels_.size(); }
  std::size_t num_communities() const { return sizes_.size(); }

  CommunityId operator[](NodeId i) const { return labels_[i]; }
  CommunityId label(NodeId i) const {
    if (i >= labels_.size()) {
      throw ConfigError("node index " + std::to_string(i) + " out of range [0, " +
                        std::to_string(labels_.size()) + ")");
    }
    return labels_[i];
  }

  std::span<const CommunityId> labels() const { return labels_; }
  std::span<const std::size_t> sizes() const { return sizes_; }
  std::size_t size_of(CommunityId c) const { return sizes_.at(c); }

  /// External name of dense community c (the raw id as text if none given).
  const std::string& original_id(CommunityId c) const { return original_.at(c); }

  /// Members of every community, each list ascending.
  std::vector<std::vector<NodeId>> members() const {
    std::vector<std::vector<NodeId>> out(sizes_.size());
    for (std::size_t c = 0; c < sizes_.size(); ++c) out[c].reserve(sizes_[c]);
    for (NodeId i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
    return out;
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.labels_ == b.labels_; }

 private:
  void assign(std::span<const std::uint64_t> raw, std::vector<std::string> raw_names) {
    std::unordered_map<std::uint64_t, CommunityId> dense;
    labels_.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      auto [it, inserted] = dense.try_emplace(raw[i], static_cast<CommunityId>(sizes_.size()));
      if (inserted) {
        sizes_.push_back(0);
        original_.push_back(raw[i] < raw_names.size() ? raw_names[raw[i]]
                                                      : std::to_string(raw[i]));
      }
      labels_[i] = it->second;
      ++sizes_[it->second];
    }
  }

  std::vector<CommunityId> labels_;
  std::vector<std::size_t> sizes_;
  std::vector<std::string> original_;
};

/// Reads `node_id community_id` lines. Node ids are dense indices unless a
/// NodeMap is supplied, in which case they are looked up as tokens.
/// Community ids are arbitrary tokens.
inline Partition load_partition(std::istream& in, std::size_t n, const NodeMap* map = nullptr) {
  constexpr std::uint64_t unset = UINT64_MAX;
  std::vector<std::uint64_t> raw(n, unset);
  std::vector<std::string> names;
  std::unordered_map<std::string, std::uint64_t> name_index;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto toks = detail::split_ws(t);
    if (toks.size() < 2) {
      throw ParseError("partition line " + std::to_string(lineno) +
                       ": expected 'node_id community_id'");
    }
    std::uint64_t node;
    if (map) {
      auto it = map->index.find(std::string(toks[0]));
      if (it == map->index.end()) {
        throw ParseError("partition line " + std::to_string(lineno) + ": unknown node id '" +
                         std::string(toks[0]) + "'");
      }
      node = it->second;
    } else if (!detail::parse_uint(toks[0], node) || node >= n) {
      throw ParseError("partition line " + std::to_string(lineno) + ": unknown node id '" +
                       std::string(toks[0]) + "' (expected integer in [0, " + std::to_string(n) +
                       "))");
    }
    if (raw[node] != unset) {
      throw ParseError("partition line " + std::to_string(lineno) + ": node " +
                       std::string(toks[0]) + " assigned twice");
    }
    auto [it, inserted] = name_index.try_emplace(std::string(toks[1]), names.size());
    if (inserted) names.emplace_back(toks[1]);
    raw[node] = it->second;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i] == unset) {
      const std::string name = map ? map->tokens.at(i) : std::to_string(i);
      throw ParseError("node " + name + " unassigned");
    }
  }
  return Partition(raw, std::move(names));
}

/// Writes `node_id community_id` lines using dense ids.
inline void write_partition(std::ostream& os, const Partition& p) {
  for (NodeId i = 0; i < p.num_nodes(); ++i) os << i << ' ' << p[i] << '\n';
}

/// Overlap counts |gt_a ∩ pred_b| between two partitions of the same nodes.
///
/// Stored as CSR over ground-truth rows; within a row, cells are sorted by
/// predicted id. Only non-zero cells are stored.
class ContingencyTable {
 public:
  struct Cell {
    CommunityId pred;
    std::size_t count;
  };

  ContingencyTable(const Partition& gt, const Partition& pred) {
    if (gt.num_nodes() != pred.num_nodes()) {
      throw ConfigError("partitions cover different node counts (" +
                        std::to_string(gt.num_nodes()) + " vs " +
                        std::to_string(pred.num_nodes()) + ")");
    }
    n_ = gt.num_nodes();
    row_sums_.assign(gt.sizes().begin(), gt.sizes().end());
    col_sums_.assign(pred.sizes().begin(), pred.sizes().end());

    // Bucket nodes by ground-truth label, then accumulate each row into a
    // scratch array indexed by predicted label.
    const std::size_t k = gt.num_communities();
    std::vector<std::size_t> start(k + 1, 0);
    for (std::size_t a = 0; a < k; ++a) start[a + 1] = start[a] + row_sums_[a];
    std::vector<NodeId> order(n_);
    {
      auto fill = start;
      for (NodeId i = 0; i < n_; ++i) order[fill[gt[i]]++] = i;
    }
    std::vector<std::size_t> scratch(pred.num_communities(), 0);
    row_ptr_.assign(k + 1, 0);
    for (std::size_t a = 0; a < k; ++a) {
      const std::size_t first = cells_.size();
      for (std::size_t p = start[a]; p < start[a + 1]; ++p) {
        const CommunityId b = pred[order[p]];
        if (scratch[b]++ == 0) cells_.push_back({b, 0});
      }
      for (std::size_t c = first; c < cells_.size(); ++c) {
        cells_[c].count = scratch[cells_[c].pred];
        scratch[cells_[c].pred] = 0;
      }
      std::sort(cells_.begin() + static_cast<std::ptrdiff_t>(first), cells_.end(),
                [](const Cell& x, const Cell& y) { return x.pred < y.pred; });
      row_ptr_[a + 1] = cells_.size();
    }
  }

  std::size_t num_nodes() const { return n_; }
  std::size_t num_gt() const { return row_sums_.size(); }
  std::size_t num_pred() const { return col_sums_.size(); }
  std::size_t num_cells() const { return cells_.size(); }

  std::span<const std::size_t> row_sums() const { return row_sums_; }
  std::span<const std::size_t> col_sums() const { return col_sums_; }

  /// Non-zero cells of ground-truth community a.
  std::span<const Cell> row(CommunityId a) const {
    return std::span<const Cell>(cells_).subspan(row_ptr_[a], row_ptr_[a + 1] - row_ptr_[a]);
  }

  std::size_t overlap(CommunityId a, CommunityId b) const {
    const auto r = row(a);
    auto it = std::lower_bound(r.begin(), r.end(), b,
                               [](const Cell& c, CommunityId x) { return c.pred < x; });
    return it != r.end() && it->pred == b ? it->count : 0;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_sums_;
  std::vector<std::size_t> col_sums_;
  std::vector<std::size_t> row_ptr_;
  std::vector<Cell> cells_;
};

inline ContingencyTable contingency(const Partition& gt, const Partition& pred) {
  return ContingencyTable(gt, pred);
}

/// Materialized co-occurrence row: v[j] = 1 iff j shares i's community.
/// O(n); meant for verification, production code uses ContingencyTable.
inline std::vector<double> cc_row(const Partition& p, NodeId i) {
  const CommunityId ci = p.label(i);
  std::vector<double> v(p.num_nodes(), 0.0);
  for (NodeId j = 0; j < p.num_nodes(); ++j) v[j] = p[j] == ci ? 1.0 : 0.0;
  return v;
}

}  // namespace faircd
