#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "faircd/common.hpp"
#include "faircd/individual_bias.hpp"
#include "faircd/partition.hpp"
#include "faircd/rng.hpp"
#include "faircd/synthgen.hpp"

namespace faircd {

enum class Scenario { expand, shrink, change };
enum class Target { minority, majority };

inline std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::expand: return "expand";
    case Scenario::shrink: return "shrink";
    case Scenario::change: return "change";
  }
  return "?";
}

inline std::string_view to_string(Target t) { return t == Target::minority ? "minority" : "majority"; }

inline Scenario parse_scenario(std::string_view s) {
  if (s == "expand") return Scenario::expand;
  if (s == "shrink") return Scenario::shrink;
  if (s == "change") return Scenario::change;
  throw ConfigError("unknown scenario '" + std::string(s) + "' (expected expand|shrink|change)");
}

inline Target parse_target(std::string_view s) {
  if (s == "minority") return Target::minority;
  if (s == "majority") return Target::majority;
  throw ConfigError("unknown target '" + std::string(s) + "' (expected minority|majority)");
}

/// Count for a perturbation ratio; std::round rounds halves away from zero.
inline std::size_t ratio_count(double ratio, std::size_t pool) {
  return static_cast<std::size_t>(std::round(ratio * static_cast<double>(pool)));
}

namespace detail {

inline void check_ratio(double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw ConfigError("perturbation ratio must lie in [0, 1]");
}

/// `count` distinct elements of `pool`, chosen uniformly.
inline std::vector<NodeId> sample_nodes(std::vector<NodeId> pool, std::size_t count, Rng& rng) {
  count = std::min(count, pool.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

struct FocalSplit {
  std::vector<NodeId> mates;    // focal's community minus focal
  std::vector<NodeId> outside;  // everything else
};

inline FocalSplit split_around(const Partition& gt, NodeId focal) {
  FocalSplit s;
  const auto c = gt.label(focal);
  for (NodeId i = 0; i < gt.num_nodes(); ++i) {
    if (i == focal) continue;
    (gt[i] == c ? s.mates : s.outside).push_back(i);
  }
  return s;
}

inline Partition perturb(const Partition& gt, NodeId focal, std::size_t leave, std::size_t join,
                         std::uint64_t seed) {
  Rng rng(seed);
  auto split = split_around(gt, focal);
  std::vector<std::uint64_t> raw(gt.labels().begin(), gt.labels().end());
  const auto own = raw[focal];
  const std::uint64_t fresh = gt.num_communities();
  for (NodeId i : sample_nodes(std::move(split.mates), leave, rng)) raw[i] = fresh;
  for (NodeId i : sample_nodes(std::move(split.outside), join, rng)) raw[i] = own;
  return Partition(std::span<const std::uint64_t>(raw));
}

}  // namespace detail

/// Moves round(ratio * |outside|) random outsiders into the focal node's
/// community.
inline Partition perturb_expand(const Partition& gt, NodeId focal, double ratio, std::uint64_t seed) {
  detail::check_ratio(ratio);
  const std::size_t outside = gt.num_nodes() - gt.size_of(gt.label(focal));
  return detail::perturb(gt, focal, 0, ratio_count(ratio, outside), seed);
}

/// Moves round(ratio * (s - 1)) random community mates of the focal node to
/// one fresh community. The focal node never moves.
inline Partition perturb_shrink(const Partition& gt, NodeId focal, double ratio, std::uint64_t seed) {
  detail::check_ratio(ratio);
  const std::size_t mates = gt.size_of(gt.label(focal)) - 1;
  return detail::perturb(gt, focal, ratio_count(ratio, mates), 0, seed);
}

/// Both at once: round(ratio * (s - 1)) mates leave and
/// round(ratio * |outside|) outsiders join.
inline Partition perturb_change(const Partition& gt, NodeId focal, double ratio, std::uint64_t seed) {
  detail::check_ratio(ratio);
  const std::size_t s = gt.size_of(gt.label(focal));
  return detail::perturb(gt, focal, ratio_count(ratio, s - 1), ratio_count(ratio, gt.num_nodes() - s),
                         seed);
}

inline Partition apply_scenario(Scenario sc, const Partition& gt, NodeId focal, double ratio,
                                std::uint64_t seed) {
  switch (sc) {
    case Scenario::expand: return perturb_expand(gt, focal, ratio, seed);
    case Scenario::shrink: return perturb_shrink(gt, focal, ratio, seed);
    case Scenario::change: return perturb_change(gt, focal, ratio, seed);
  }
  throw ConfigError("unknown scenario");
}

struct SweepConfig {
  Scenario scenario = Scenario::expand;
  Target target = Target::minority;
  std::vector<double> ratios{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::size_t runs = 100;
  std::size_t n = 100;
  std::uint64_t seed = 0;
  double minority_frac = 0.2;
  /// Expected degree inside / across blocks of the planted graph. Edges do
  /// not enter IB; they keep the planted graph sparse at every n.
  double intra_degree = 8.0;
  double inter_degree = 1.0;

  void validate() const {
    if (runs < 1) throw ConfigError("sweep needs runs >= 1");
    if (ratios.empty()) throw ConfigError("sweep needs at least one ratio");
    for (double r : ratios) detail::check_ratio(r);
    if (!std::is_sorted(ratios.begin(), ratios.end())) throw ConfigError("sweep ratios must be ascending");
  }
};

struct SweepPoint {
  double ratio = 0.0;
  double mean_ib = 0.0;
  double std_ib = 0.0;
  std::vector<double> runs;
  std::vector<NodeId> focal;
};

struct SweepResult {
  SweepConfig config;
  std::size_t community_size = 0;  // size of the focal community
  std::vector<SweepPoint> points;
};

/// Mean focal-node IB over seeded repetitions for every ratio. Repetition r
/// of ratio index j draws its focal node and perturbation from
/// derive_seed(seed, "sweep", j) -> derive_seed(., "run", r), so points are
/// independent of evaluation order.
inline SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto m = static_cast<double>(std::round(cfg.minority_frac * static_cast<double>(cfg.n)));
  const double big = static_cast<double>(cfg.n) - m;
  const double intra_p = std::min(1.0, cfg.intra_degree / std::max(1.0, std::max(m, big) - 1.0));
  const double inter_p = std::min(1.0, cfg.inter_degree / std::max(1.0, big));
  const auto planted = generate_two_community(cfg.n, cfg.minority_frac, intra_p, inter_p,
                                              derive_seed(cfg.seed, "sweep-graph"));
  const Partition& gt = planted.planted;
  const CommunityId focal_comm = cfg.target == Target::minority ? 0 : 1;
  std::vector<NodeId> candidates;
  for (NodeId i = 0; i < gt.num_nodes(); ++i) {
    if (gt[i] == focal_comm) candidates.push_back(i);
  }

  SweepResult res;
  res.config = cfg;
  res.community_size = candidates.size();
  for (std::size_t j = 0; j < cfg.ratios.size(); ++j) {
    SweepPoint pt;
    pt.ratio = cfg.ratios[j];
    const auto point_seed = derive_seed(cfg.seed, "sweep", j);
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      const auto run_seed = derive_seed(point_seed, "run", r);
      Rng pick(run_seed);
      const NodeId focal = candidates[pick.below(candidates.size())];
      const Partition pred = apply_scenario(cfg.scenario, gt, focal, pt.ratio, pick.next());
      pt.runs.push_back(ib_all_fast(gt, pred).ib[focal]);
      pt.focal.push_back(focal);
    }
    const auto ms = detail::mean_std(pt.runs);
    pt.mean_ib = ms.mean;
    pt.std_ib = ms.std;
    res.points.push_back(std::move(pt));
  }
  return res;
}

/// `scenario,target,n,ratio,mean_ib,std_ib`; header written when requested.
inline void write_sweep_csv(std::ostream& os, const SweepResult& r, bool header = true) {
  if (header) os << "scenario,target,n,ratio,mean_ib,std_ib\n";
  for (const auto& p : r.points) {
    os << to_string(r.config.scenario) << ',' << to_string(r.config.target) << ',' << r.config.n << ','
       << detail::fmt_double(p.ratio) << ',' << detail::fmt_double(p.mean_ib) << ','
       << detail::fmt_double(p.std_ib) << '\n';
  }
}

/// Long format, one row per repetition: `scenario,target,n,ratio,run,focal,ib`.
inline void write_sweep_runs_csv(std::ostream& os, const SweepResult& r, bool header = true) {
  if (header) os << "scenario,target,n,ratio,run,focal,ib\n";
  for (const auto& p : r.points) {
    for (std::size_t k = 0; k < p.runs.size(); ++k) {
      os << to_string(r.config.scenario) << ',' << to_string(r.config.target) << ',' << r.config.n << ','
         << detail::fmt_double(p.ratio) << ',' << k << ',' << p.focal[k] << ','
         << detail::fmt_double(p.runs[k]) << '\n';
    }
  }
}

}  // namespace faircd
