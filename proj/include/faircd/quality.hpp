#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "faircd/common.hpp"
#include "faircd/graph.hpp"
#include "faircd/partition.hpp"

namespace faircd {

struct QualityScores {
  double modularity = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double nf1 = 0.0;
};

/// Newman-Girvan modularity, Q = sum_c [ e_c/m - resolution * (d_c / 2m)^2 ].
inline double modularity(const Graph& g, const Partition& p, double resolution = 1.0) {
  if (p.num_nodes() != g.num_nodes()) throw ConfigError("partition does not cover the graph");
  const std::size_t m = g.num_edges();
  if (m == 0) throw ConfigError("modularity is undefined on an edgeless graph");
  std::vector<double> intra(p.num_communities(), 0.0), vol(p.num_communities(), 0.0);
  for (auto [u, v] : g.edges()) {
    if (p[u] == p[v]) intra[p[u]] += 1.0;
  }
  for (NodeId u = 0; u < g.num_nodes(); ++u) vol[p[u]] += static_cast<double>(g.degree(u));
  const double md = static_cast<double>(m);
  double q = 0.0;
  for (std::size_t c = 0; c < intra.size(); ++c) {
    const double f = vol[c] / (2.0 * md);
    q += intra[c] / md - resolution * f * f;
  }
  return q;
}

enum class NmiNorm { arithmetic, max, min, geometric };

inline NmiNorm parse_nmi_norm(std::string_view s) {
  if (s == "arithmetic") return NmiNorm::arithmetic;
  if (s == "max") return NmiNorm::max;
  if (s == "min") return NmiNorm::min;
  if (s == "geometric") return NmiNorm::geometric;
  throw ConfigError("unknown NMI normalizer '" + std::string(s) +
                    "' (expected arithmetic|max|min|geometric)");
}

namespace detail {

inline double entropy(std::span<const std::size_t> sizes, double n) {
  double h = 0.0;
  for (auto s : sizes) {
    if (s == 0) continue;
    const double ps = static_cast<double>(s) / n;
    h += ps * std::log(n / static_cast<double>(s));
  }
  return h;
}

inline std::uint64_t pairs(std::uint64_t x) { return x * (x - (x > 0 ? 1 : 0)) / 2; }

}  // namespace detail

/// Normalized mutual information from the contingency table.
///
/// Degenerate cases: two single-community partitions give 1; exactly one
/// single-community side gives 0.
inline double nmi(const ContingencyTable& ct, NmiNorm norm = NmiNorm::arithmetic) {
  const bool gt_trivial = ct.num_gt() <= 1, pred_trivial = ct.num_pred() <= 1;
  if (gt_trivial && pred_trivial) return 1.0;
  if (gt_trivial || pred_trivial) return 0.0;
  const double n = static_cast<double>(ct.num_nodes());
  const double hg = detail::entropy(ct.row_sums(), n);
  const double hp = detail::entropy(ct.col_sums(), n);
  double mi = 0.0;
  for (CommunityId a = 0; a < ct.num_gt(); ++a) {
    const double sa = static_cast<double>(ct.row_sums()[a]);
    for (const auto& c : ct.row(a)) {
      const double o = static_cast<double>(c.count);
      mi += (o / n) * std::log(n * o / (sa * static_cast<double>(ct.col_sums()[c.pred])));
    }
  }
  double denom = 0.0;
  switch (norm) {
    case NmiNorm::arithmetic: denom = 0.5 * (hg + hp); break;
    case NmiNorm::max: denom = std::max(hg, hp); break;
    case NmiNorm::min: denom = std::min(hg, hp); break;
    case NmiNorm::geometric: denom = std::sqrt(hg * hp); break;
  }
  return std::clamp(mi / denom, 0.0, 1.0);
}

inline double nmi(const Partition& gt, const Partition& pred, NmiNorm norm = NmiNorm::arithmetic) {
  return nmi(ContingencyTable(gt, pred), norm);
}

/// Adjusted Rand index (Hubert & Arabie) from pair counts.
inline double ari(const ContingencyTable& ct) {
  const std::uint64_t n = ct.num_nodes();
  if (n < 2) throw ConfigError("ARI needs at least two nodes");
  std::uint64_t index = 0, sum_gt = 0, sum_pred = 0;
  for (CommunityId a = 0; a < ct.num_gt(); ++a) {
    for (const auto& c : ct.row(a)) index += detail::pairs(c.count);
    sum_gt += detail::pairs(ct.row_sums()[a]);
  }
  for (auto s : ct.col_sums()) sum_pred += detail::pairs(s);
  const double total = static_cast<double>(detail::pairs(n));
  const double expected = static_cast<double>(sum_gt) * static_cast<double>(sum_pred) / total;
  const double max_index = 0.5 * (static_cast<double>(sum_gt) + static_cast<double>(sum_pred));
  // Only reachable when both partitions are all-singletons or both are one
  // community, i.e. they are identical.
  if (max_index == expected) return 1.0;
  return (static_cast<double>(index) - expected) / (max_index - expected);
}

inline double ari(const Partition& gt, const Partition& pred) {
  return ari(ContingencyTable(gt, pred));
}

/// Ground-truth community of maximum overlap for every predicted community
/// (ties go to the smaller ground-truth id), with that overlap.
struct PredMatch {
  CommunityId gt;
  std::size_t overlap;
};

inline std::vector<PredMatch> match_pred_to_gt(const ContingencyTable& ct) {
  std::vector<PredMatch> best(ct.num_pred(), PredMatch{0, 0});
  // Rows are visited in increasing gt id, so strict '>' keeps the smaller id.
  for (CommunityId a = 0; a < ct.num_gt(); ++a) {
    for (const auto& c : ct.row(a)) {
      if (c.count > best[c.pred].overlap) best[c.pred] = {a, c.count};
    }
  }
  return best;
}

/// Normalized F1: mean F1 of predicted communities against their best
/// ground-truth match, times coverage, divided by redundancy.
///
///   coverage   = distinct matched gt communities / |gt communities|
///   redundancy = |pred communities| / distinct matched gt communities
///
/// Not symmetric: matching runs from predicted to ground truth.
inline double nf1(const ContingencyTable& ct) {
  const auto match = match_pred_to_gt(ct);
  std::vector<bool> hit(ct.num_gt(), false);
  double f1_sum = 0.0;
  for (CommunityId b = 0; b < match.size(); ++b) {
    const double o = static_cast<double>(match[b].overlap);
    const double precision = o / static_cast<double>(ct.col_sums()[b]);
    const double recall = o / static_cast<double>(ct.row_sums()[match[b].gt]);
    f1_sum += 2.0 * precision * recall / (precision + recall);
    hit[match[b].gt] = true;
  }
  const auto distinct = static_cast<double>(std::count(hit.begin(), hit.end(), true));
  const double mean_f1 = f1_sum / static_cast<double>(match.size());
  const double coverage = distinct / static_cast<double>(ct.num_gt());
  const double redundancy = static_cast<double>(match.size()) / distinct;
  return mean_f1 * coverage / redundancy;
}

inline double nf1(const Partition& gt, const Partition& pred) {
  return nf1(ContingencyTable(gt, pred));
}

inline QualityScores quality_scores(const Graph& g, const Partition& gt, const Partition& pred,
                                    NmiNorm norm = NmiNorm::arithmetic) {
  const ContingencyTable ct(gt, pred);
  QualityScores q;
  q.modularity = modularity(g, pred);
  q.nmi = nmi(ct, norm);
  q.ari = ari(ct);
  q.nf1 = nf1(ct);
  return q;
}

}  // namespace faircd
