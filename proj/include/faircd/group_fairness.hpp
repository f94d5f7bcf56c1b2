#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "faircd/common.hpp"
#include "faircd/graph.hpp"
#include "faircd/partition.hpp"

namespace faircd {

struct CommunityStats {
  std::size_t size = 0;
  double density = 1.0;
  double conductance = 0.0;
};

/// Size, internal density and conductance of every community of p.
///
/// Singletons have density 1. Conductance is cut / min(vol_c, vol_rest) and
/// is 0 when that minimum is 0 (whole-graph or edgeless communities).
inline std::vector<CommunityStats> community_stats(const Graph& g, const Partition& p) {
  if (p.num_nodes() != g.num_nodes()) throw ConfigError("partition does not cover the graph");
  const std::size_t k = p.num_communities();
  std::vector<std::size_t> internal(k, 0), cut(k, 0), vol(k, 0);
  for (auto [u, v] : g.edges()) {
    if (p[u] == p[v]) {
      ++internal[p[u]];
    } else {
      ++cut[p[u]];
      ++cut[p[v]];
    }
  }
  std::size_t total_vol = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    vol[p[u]] += g.degree(u);
    total_vol += g.degree(u);
  }
  std::vector<CommunityStats> out(k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t s = p.sizes()[c];
    out[c].size = s;
    out[c].density = s < 2 ? 1.0
                           : 2.0 * static_cast<double>(internal[c]) /
                                 (static_cast<double>(s) * static_cast<double>(s - 1));
    const std::size_t denom = std::min(vol[c], total_vol - vol[c]);
    out[c].conductance = denom == 0 ? 0.0 : static_cast<double>(cut[c]) / static_cast<double>(denom);
  }
  return out;
}

/// Per-ground-truth-community recovery scores against its best-overlap
/// predicted community.
struct CommunityScores {
  CommunityId matched_pred = 0;
  double fccn = 0.0;
  double f1 = 0.0;
  double fcce = 0.0;
};

/// Each gt community a is mapped to the predicted community b* of maximum
/// overlap (ties to the smaller predicted id). fcce is the fraction of a's
/// internal edges with both endpoints in b*; communities without internal
/// edges score 1.
inline std::vector<CommunityScores> community_scores(const Graph& g, const Partition& gt,
                                                     const Partition& pred) {
  if (gt.num_nodes() != g.num_nodes()) throw ConfigError("partition does not cover the graph");
  const ContingencyTable ct(gt, pred);
  const std::size_t k = gt.num_communities();
  std::vector<CommunityScores> out(k);
  for (CommunityId a = 0; a < k; ++a) {
    std::size_t best = 0;
    for (const auto& c : ct.row(a)) {
      if (c.count > best) {
        best = c.count;
        out[a].matched_pred = c.pred;
      }
    }
    const double o = static_cast<double>(best);
    const double recall = o / static_cast<double>(ct.row_sums()[a]);
    const double precision = o / static_cast<double>(ct.col_sums()[out[a].matched_pred]);
    out[a].fccn = recall;
    out[a].f1 = 2.0 * precision * recall / (precision + recall);
  }
  std::vector<std::size_t> internal(k, 0), kept(k, 0);
  for (auto [u, v] : g.edges()) {
    const auto a = gt[u];
    if (gt[v] != a) continue;
    ++internal[a];
    if (pred[u] == out[a].matched_pred && pred[v] == out[a].matched_pred) ++kept[a];
  }
  for (std::size_t a = 0; a < k; ++a) {
    out[a].fcce = internal[a] == 0 ? 1.0
                                   : static_cast<double>(kept[a]) / static_cast<double>(internal[a]);
  }
  return out;
}

/// Least-squares slope of y on x; nullopt when x has no spread.
inline std::optional<double> ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("ols_slope: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

/// Min-max scaling to [0, 1]; nullopt when all values coincide.
inline std::optional<std::vector<double>> minmax_normalize(std::span<const double> v) {
  if (v.empty()) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo == *hi) return std::nullopt;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / (*hi - *lo);
  return out;
}

enum class Property : std::size_t { size = 0, conductance = 1, density = 2 };
enum class Score : std::size_t { fccn = 0, f1 = 1, fcce = 2 };

inline constexpr std::array<std::string_view, 3> kPropertyNames{"size", "conductance", "density"};
inline constexpr std::array<std::string_view, 3> kScoreNames{"fccn", "f1", "fcce"};

struct GroupFairnessResult {
  /// phi[property][score]; nullopt when the property is constant across
  /// communities.
  std::array<std::array<std::optional<double>, 3>, 3> phi{};
  std::vector<CommunityStats> stats;
  std::vector<CommunityScores> scores;
  /// normalized[property][community]; empty when undefined.
  std::array<std::vector<double>, 3> normalized;

  std::optional<double> at(Property p, Score s) const {
    return phi[static_cast<std::size_t>(p)][static_cast<std::size_t>(s)];
  }
};

/// Slope of each per-community score regressed on each min-max normalized
/// community property. Positive values favour communities with large values
/// of the property.
inline GroupFairnessResult phi(const Graph& g, const Partition& gt, const Partition& pred) {
  if (gt.num_communities() < 2) {
    throw ConfigError("group fairness needs at least two ground-truth communities");
  }
  GroupFairnessResult r;
  r.stats = community_stats(g, gt);
  r.scores = community_scores(g, gt, pred);
  const std::size_t k = r.stats.size();

  std::array<std::vector<double>, 3> raw;
  std::array<std::vector<double>, 3> ys;
  for (auto& v : raw) v.resize(k);
  for (auto& v : ys) v.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    raw[0][c] = static_cast<double>(r.stats[c].size);
    raw[1][c] = r.stats[c].conductance;
    raw[2][c] = r.stats[c].density;
    ys[0][c] = r.scores[c].fccn;
    ys[1][c] = r.scores[c].f1;
    ys[2][c] = r.scores[c].fcce;
  }
  for (std::size_t p = 0; p < 3; ++p) {
    auto norm = minmax_normalize(raw[p]);
    if (!norm) continue;
    for (std::size_t s = 0; s < 3; ++s) r.phi[p][s] = ols_slope(*norm, ys[s]);
    r.normalized[p] = std::move(*norm);
  }
  return r;
}

/// Long-format per-community points:
/// `community,property,property_norm,fccn,f1,fcce,property_value`.
/// property_norm is empty when the property is constant.
inline void write_phi_points_csv(std::ostream& os, const GroupFairnessResult& r) {
  os << "community,property,property_norm,fccn,f1,fcce,property_value\n";
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t c = 0; c < r.stats.size(); ++c) {
      const double value = p == 0   ? static_cast<double>(r.stats[c].size)
                           : p == 1 ? r.stats[c].conductance
                                    : r.stats[c].density;
      os << c << ',' << kPropertyNames[p] << ',';
      if (!r.normalized[p].empty()) os << detail::fmt_double(r.normalized[p][c]);
      os << ',' << detail::fmt_double(r.scores[c].fccn) << ',' << detail::fmt_double(r.scores[c].f1)
         << ',' << detail::fmt_double(r.scores[c].fcce) << ',' << detail::fmt_double(value) << '\n';
    }
  }
}

}  // namespace faircd
