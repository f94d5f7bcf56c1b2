#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <iostream>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "faircd/common.hpp"
#include "faircd/partition.hpp"

namespace faircd {

/// Node-level Individual Bias plus graph-level summary.
struct BiasReport {
  std::vector<double> ib;        // IB_i per node, each in [0, 1)
  double ib_g = 0.0;             // population standard deviation of ib
  double mean_ib = 0.0;
  std::vector<double> gt_community_mean;  // mean IB per ground-truth community
  std::size_t k_gt = 0;
  std::size_t k_pred = 0;
};

/// 1 - (u.v) / (|u| |v|). For non-negative inputs the result is in [0, 1].
inline double cosine_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ConfigError("cosine_distance: vectors differ in length");
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    dot += u[j] * v[j];
    uu += u[j] * u[j];
    vv += v[j] * v[j];
  }
  if (uu == 0.0 || vv == 0.0) throw ConfigError("cosine_distance: zero-norm vector");
  // One sqrt of the product: exact for integer-valued rows, so identical
  // rows give exactly 0.
  return 1.0 - dot / std::sqrt(uu * vv);
}

/// Closed form of the cosine distance between two co-occurrence rows.
///
/// For node i with gt community a and predicted community b, the rows are
/// indicator vectors of a and b, so the dot product is |a ∩ b| and the
/// squared norms are |a| and |b|.
inline double ib_from_counts(std::size_t overlap, std::size_t gt_size, std::size_t pred_size) {
  // A node always lies in its own cell.
  if (overlap == 0) {
    std::cerr << "faircd: internal invariant violated: zero overlap for a node's own cell\n";
    std::abort();
  }
  const auto prod = static_cast<std::uint64_t>(gt_size) * static_cast<std::uint64_t>(pred_size);
  return 1.0 - static_cast<double>(overlap) / std::sqrt(static_cast<double>(prod));
}

inline double ib_node_fast(const ContingencyTable& ct, CommunityId gt_label,
                           CommunityId pred_label) {
  return ib_from_counts(ct.overlap(gt_label, pred_label), ct.row_sums()[gt_label],
                        ct.col_sums()[pred_label]);
}

namespace detail {

inline void summarize(BiasReport& r, const Partition& gt) {
  const std::size_t n = r.ib.size();
  r.k_gt = gt.num_communities();
  if (n == 0) return;
  const auto ms = mean_std(r.ib);
  r.mean_ib = ms.mean;
  r.ib_g = ms.std;

  r.gt_community_mean.assign(gt.num_communities(), 0.0);
  for (NodeId i = 0; i < n; ++i) r.gt_community_mean[gt[i]] += r.ib[i];
  for (std::size_t a = 0; a < r.gt_community_mean.size(); ++a) {
    r.gt_community_mean[a] /= static_cast<double>(gt.size_of(static_cast<CommunityId>(a)));
  }
}

}  // namespace detail

/// IB for every node through the contingency table: O(n + cells).
///
/// `workers` > 1 splits the per-node pass across threads; output is
/// bit-identical for any worker count.
inline BiasReport ib_all_fast(const Partition& gt, const Partition& pred, unsigned workers = 1) {
  const ContingencyTable ct(gt, pred);
  const std::size_t n = gt.num_nodes();

  // One distance per cell, then a gather per node.
  std::vector<std::size_t> row_ptr(ct.num_gt() + 1, 0);
  std::vector<double> cell_ib;
  cell_ib.reserve(ct.num_cells());
  for (CommunityId a = 0; a < ct.num_gt(); ++a) {
    for (const auto& c : ct.row(a)) {
      cell_ib.push_back(ib_from_counts(c.count, ct.row_sums()[a], ct.col_sums()[c.pred]));
    }
    row_ptr[a + 1] = cell_ib.size();
  }

  BiasReport r;
  r.ib.resize(n);
  r.k_pred = pred.num_communities();
  auto fill = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto a = gt[static_cast<NodeId>(i)];
      const auto b = pred[static_cast<NodeId>(i)];
      const auto cells = ct.row(a);
      auto it = std::lower_bound(cells.begin(), cells.end(), b,
                                 [](const auto& c, CommunityId x) { return c.pred < x; });
      r.ib[i] = cell_ib[row_ptr[a] + static_cast<std::size_t>(it - cells.begin())];
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    fill(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = std::min(n, w * chunk), hi = std::min(n, lo + chunk);
      pool.emplace_back(fill, lo, hi);
    }
  }
  detail::summarize(r, gt);
  return r;
}

inline constexpr std::size_t kDefaultNaiveCap = 5000;

/// Reference implementation: materializes both co-occurrence rows of every
/// node and applies cosine_distance. O(n^2) time.
inline BiasReport ib_all_naive(const Partition& gt, const Partition& pred,
                               std::size_t cap = kDefaultNaiveCap) {
  if (gt.num_nodes() != pred.num_nodes()) {
    throw ConfigError("partitions cover different node counts");
  }
  const std::size_t n = gt.num_nodes();
  if (n > cap) {
    throw ConfigError("naive IB oracle is O(n^2); n = " + std::to_string(n) + " exceeds cap " +
                      std::to_string(cap) + ", use the fast path");
  }
  BiasReport r;
  r.ib.resize(n);
  r.k_pred = pred.num_communities();
  for (NodeId i = 0; i < n; ++i) {
    const auto g = cc_row(gt, i);
    const auto p = cc_row(pred, i);
    r.ib[i] = cosine_distance(g, p);
  }
  detail::summarize(r, gt);
  return r;
}

/// `node_id,ib` rows.
inline void write_bias_csv(std::ostream& os, const BiasReport& r) {
  os << "node_id,ib\n";
  for (std::size_t i = 0; i < r.ib.size(); ++i) os << i << ',' << detail::fmt_double(r.ib[i]) << '\n';
}

/// `{"ib_g":..,"mean_ib":..,"n":..,"k_gt":..,"k_pred":..}`
inline void write_bias_summary_json(std::ostream& os, const BiasReport& r) {
  os << "{\"ib_g\":" << detail::fmt_double(r.ib_g) << ",\"mean_ib\":" << detail::fmt_double(r.mean_ib)
     << ",\"n\":" << r.ib.size() << ",\"k_gt\":" << r.k_gt << ",\"k_pred\":" << r.k_pred << "}\n";
}

}  // namespace faircd
