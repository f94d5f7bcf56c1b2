#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "faircd/common.hpp"
#include "faircd/graph.hpp"
#include "faircd/partition.hpp"
#include "faircd/rng.hpp"

namespace faircd {

/// Knobs of the ABCD-lite generator. Defaults are the benchmark settings
/// used for the synthetic experiments (n = 10,000, xi = 0.2).
struct AbcdParams {
  std::size_t n = 10000;
  double gamma = 2.5;  // degree power-law exponent
  std::size_t d_min = 5;
  std::size_t d_max = 50;
  std::size_t d_max_iter = 1000;
  double beta = 1.5;  // community-size power-law exponent
  std::size_t c_min = 100;
  std::size_t c_max = 1000;
  std::size_t c_max_iter = 1000;
  double xi = 0.2;  // fraction of stubs routed to the background graph
  std::uint64_t seed = 0;

  void validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("invalid ABCD parameters: " + m); };
    if (n < 2) fail("n must be at least 2");
    if (d_min < 1) fail("d_min must be >= 1");
    if (d_min > d_max) fail("d_min must not exceed d_max");
    if (d_max >= n) fail("d_max must be < n");
    if (c_min < 1) fail("c_min must be >= 1");
    if (c_min > c_max) fail("c_min must not exceed c_max");
    if (c_max > n) fail("c_max must not exceed n");
    if (!(xi >= 0.0 && xi <= 1.0)) fail("xi must lie in [0, 1]");
    if (!(gamma > 0.0) || !(beta > 0.0)) fail("power-law exponents must be positive");
    if (d_max_iter < 1 || c_max_iter < 1) fail("iteration caps must be >= 1");
  }
};

struct GeneratorStats {
  std::size_t size_attempts = 0;   // community-size sequences drawn
  std::size_t diverted_stubs = 0;  // internal stubs beyond community capacity
  std::size_t dropped_stubs = 0;   // parity leftovers and unrepairable pairs
  double background_fraction = 0.0;  // share of stubs actually sent to the background
};

struct SyntheticGraph {
  Graph graph;
  Partition planted;
  GeneratorStats stats;
};

namespace detail {

/// Inverse-CDF sampler for P(k) ∝ k^-exponent on the integers [lo, hi].
class TruncatedPowerLaw {
 public:
  TruncatedPowerLaw(std::size_t lo, std::size_t hi, double exponent) : lo_(lo) {
    cdf_.reserve(hi - lo + 1);
    double acc = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
      acc += std::pow(static_cast<double>(k), -exponent);
      cdf_.push_back(acc);
    }
  }

  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform() * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    return lo_ + idx;
  }

 private:
  std::size_t lo_;
  std::vector<double> cdf_;
};

/// Simple-graph edge accumulator shared by all pairing passes.
class EdgeSink {
 public:
  explicit EdgeSink(std::size_t n) : n_(n) {}

  bool acceptable(NodeId u, NodeId v) const { return u != v && !set_.contains(key(u, v)); }

  void add(NodeId u, NodeId v) {
    set_.insert(key(u, v));
    edges_.emplace_back(u, v);
  }

  void remove_at(std::size_t idx) {
    set_.erase(key(edges_[idx].first, edges_[idx].second));
    edges_[idx] = edges_.back();
    edges_.pop_back();
  }

  std::vector<std::pair<NodeId, NodeId>>& edges() { return edges_; }

 private:
  std::uint64_t key(NodeId u, NodeId v) const {
    return static_cast<std::uint64_t>(std::min(u, v)) * n_ + std::max(u, v);
  }

  std::size_t n_;
  std::unordered_set<std::uint64_t> set_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
};

/// Configuration-model pairing of `stubs` into `sink`. Pairs that would
/// create a self-loop or multi-edge are re-paired a bounded number of times,
/// then repaired by switching with a random edge of this pass; whatever is
/// still invalid is dropped. Returns the number of dropped stubs.
inline std::size_t pair_stubs(std::vector<NodeId> stubs, EdgeSink& sink, Rng& rng) {
  const std::size_t first_edge = sink.edges().size();
  std::size_t dropped = 0;
  if (stubs.size() % 2 == 1) {
    stubs.pop_back();
    ++dropped;
  }
  for (int round = 0; round < 10 && !stubs.empty(); ++round) {
    rng.shuffle(std::span<NodeId>(stubs));
    std::vector<NodeId> bad;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const NodeId u = stubs[i], v = stubs[i + 1];
      if (sink.acceptable(u, v)) {
        sink.add(u, v);
      } else {
        bad.push_back(u);
        bad.push_back(v);
      }
    }
    stubs = std::move(bad);
    // Re-shuffling only helps when there are distinct endpoints to mix.
    if (stubs.size() <= 2) break;
  }
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const NodeId u = stubs[i], v = stubs[i + 1];
    bool fixed = false;
    for (int attempt = 0; attempt < 50 && sink.edges().size() > first_edge; ++attempt) {
      const std::size_t pool = sink.edges().size() - first_edge;
      const std::size_t idx = first_edge + static_cast<std::size_t>(rng.below(pool));
      auto [x, y] = sink.edges()[idx];
      if (rng.bernoulli(0.5)) std::swap(x, y);
      if (u == x || v == y || (u == y && v == x)) continue;
      if (!sink.acceptable(u, x) || !sink.acceptable(v, y)) continue;
      if (std::minmax(u, x) == std::minmax(v, y)) continue;
      sink.remove_at(idx);
      sink.add(u, x);
      sink.add(v, y);
      fixed = true;
      break;
    }
    if (!fixed) dropped += 2;
  }
  return dropped;
}

}  // namespace detail

/// ABCD-lite benchmark graph with a planted partition.
///
///  1. Community sizes ~ truncated power law (beta) on [c_min, c_max],
///     drawn until they cover n, the last one trimmed; a draw whose trimmed
///     remainder falls below c_min is redrawn (up to c_max_iter times).
///  2. Degrees ~ truncated power law (gamma) on [d_min, d_max]; an odd
///     degree sum is fixed by redrawing one node (up to d_max_iter times).
///  3. Nodes are assigned in decreasing degree order to a random community
///     with a free slot, preferring communities large enough to hold the
///     node's internal stubs.
///  4. Each node keeps round((1 - b) * degree) stubs (randomized rounding)
///     for a configuration model inside its community and sends the rest to
///     a global background configuration model. Internal stubs beyond the
///     community's capacity are diverted to the background.
///     A background edge lands inside one community with probability
///     q = sum_c (vol_c / vol)^2, so b = min(1, xi / (1 - q)) makes the
///     expected inter-community edge fraction equal xi. xi = 0 and xi = 1
///     map to b = 0 and b = 1.
///  5. Self-loops and multi-edges are repaired with bounded retries, then
///     dropped.
inline SyntheticGraph generate_abcd_lite(const AbcdParams& p) {
  p.validate();
  Rng rng(derive_seed(p.seed, "abcd-lite"));
  SyntheticGraph out;
  const std::size_t n = p.n;

  // 1. community sizes
  const detail::TruncatedPowerLaw size_law(p.c_min, p.c_max, p.beta);
  std::vector<std::size_t> sizes;
  bool sized = false;
  for (std::size_t attempt = 0; attempt < p.c_max_iter && !sized; ++attempt) {
    ++out.stats.size_attempts;
    sizes.clear();
    std::size_t total = 0;
    sized = true;
    while (total < n) {
      std::size_t s = size_law(rng);
      if (total + s > n) {
        s = n - total;
        if (s < p.c_min) {
          sized = false;
          break;
        }
      }
      sizes.push_back(s);
      total += s;
    }
  }
  if (!sized) {
    throw ConfigError("ABCD-lite community-size sampling failed after " +
                      std::to_string(p.c_max_iter) + " attempts (c_min too large for n?)");
  }

  // 2. degrees
  const detail::TruncatedPowerLaw degree_law(p.d_min, p.d_max, p.gamma);
  std::vector<std::size_t> degree(n);
  std::size_t degree_sum = 0;
  for (auto& d : degree) {
    d = degree_law(rng);
    degree_sum += d;
  }
  for (std::size_t it = 0; it < p.d_max_iter && degree_sum % 2 == 1; ++it) {
    const auto i = static_cast<std::size_t>(rng.below(n));
    degree_sum -= degree[i];
    degree[i] = degree_law(rng);
    degree_sum += degree[i];
  }
  if (degree_sum % 2 == 1) {
    throw ConfigError("ABCD-lite degree sampling could not reach an even degree sum after " +
                      std::to_string(p.d_max_iter) + " attempts");
  }

  // 3. community assignment, largest degrees first
  std::vector<NodeId> by_degree(n);
  std::iota(by_degree.begin(), by_degree.end(), 0);
  rng.shuffle(std::span<NodeId>(by_degree));
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](NodeId a, NodeId b) { return degree[a] > degree[b]; });
  std::vector<std::size_t> comm_order(sizes.size());
  std::iota(comm_order.begin(), comm_order.end(), 0);
  std::stable_sort(comm_order.begin(), comm_order.end(),
                   [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
  std::vector<std::size_t> free_slots = sizes;
  std::vector<std::uint64_t> label(n);
  for (NodeId u : by_degree) {
    const auto need = static_cast<std::size_t>(std::ceil((1.0 - p.xi) * static_cast<double>(degree[u])));
    // Communities of size > need form a prefix of comm_order.
    std::size_t prefix = 0, slots = 0;
    while (prefix < comm_order.size() && sizes[comm_order[prefix]] > need) {
      slots += free_slots[comm_order[prefix]];
      ++prefix;
    }
    if (slots == 0) {
      // Nothing large enough has room; take any free slot and let the
      // capacity check below divert the excess.
      prefix = comm_order.size();
      for (auto c : comm_order) slots += free_slots[c];
    }
    auto r = rng.below(slots);
    for (std::size_t t = 0; t < prefix; ++t) {
      const auto c = comm_order[t];
      if (r < free_slots[c]) {
        label[u] = c;
        --free_slots[c];
        break;
      }
      r -= free_slots[c];
    }
  }
  out.planted = Partition(std::span<const std::uint64_t>(label), {});
  const auto& planted = out.planted;
  const auto members = planted.members();

  // 4. stub split
  double q = 0.0;
  {
    std::vector<double> vol(planted.num_communities(), 0.0);
    for (NodeId u = 0; u < n; ++u) vol[planted[u]] += static_cast<double>(degree[u]);
    for (double v : vol) q += (v / static_cast<double>(degree_sum)) * (v / static_cast<double>(degree_sum));
  }
  const double b = p.xi >= 1.0 || q >= 1.0 ? 1.0 : std::min(1.0, p.xi / (1.0 - q));
  out.stats.background_fraction = b;
  std::vector<std::size_t> internal(n);
  for (NodeId u = 0; u < n; ++u) {
    const double want = (1.0 - b) * static_cast<double>(degree[u]);
    auto k = static_cast<std::size_t>(std::floor(want + rng.uniform()));
    k = std::min(k, degree[u]);
    const std::size_t cap = planted.size_of(planted[u]) - 1;
    if (k > cap) {
      out.stats.diverted_stubs += k - cap;
      k = cap;
    }
    internal[u] = k;
  }

  detail::EdgeSink sink(n);
  for (const auto& mem : members) {
    std::size_t total = 0;
    for (NodeId u : mem) total += internal[u];
    if (total % 2 == 1) {
      // Move one stub off a random node that has one.
      std::vector<NodeId> holders;
      for (NodeId u : mem) {
        if (internal[u] > 0) holders.push_back(u);
      }
      const NodeId u = holders[rng.below(holders.size())];
      --internal[u];
      if (p.xi == 0.0) {
        --degree[u];
        ++out.stats.dropped_stubs;
      }
    }
    std::vector<NodeId> stubs;
    for (NodeId u : mem) stubs.insert(stubs.end(), internal[u], u);
    out.stats.dropped_stubs += detail::pair_stubs(std::move(stubs), sink, rng);
  }

  std::vector<NodeId> background;
  for (NodeId u = 0; u < n; ++u) background.insert(background.end(), degree[u] - internal[u], u);
  out.stats.dropped_stubs += detail::pair_stubs(std::move(background), sink, rng);

  out.graph = Graph(n, sink.edges());
  return out;
}

/// Two planted blocks: nodes [0, m) form the minority community with
/// m = round(minority_frac * n), the rest the majority. Edges are drawn
/// independently with intra_p inside blocks and inter_p across.
inline SyntheticGraph generate_two_community(std::size_t n, double minority_frac, double intra_p,
                                             double inter_p, std::uint64_t seed) {
  if (!(minority_frac > 0.0 && minority_frac < 1.0)) {
    throw ConfigError("minority fraction must lie in (0, 1)");
  }
  if (!(intra_p >= 0.0 && intra_p <= 1.0 && inter_p >= 0.0 && inter_p <= 1.0)) {
    throw ConfigError("edge probabilities must lie in [0, 1]");
  }
  const auto m = static_cast<std::size_t>(std::round(minority_frac * static_cast<double>(n)));
  if (m == 0 || m >= n) {
    throw ConfigError("two-community split of n = " + std::to_string(n) +
                      " leaves a block empty");
  }
  Rng rng(derive_seed(seed, "two-community"));
  std::vector<std::pair<NodeId, NodeId>> edges;

  // Geometric skipping over the pair index space.
  auto skip = [&](double prob) -> std::uint64_t {
    if (prob >= 1.0) return 0;
    const double r = rng.uniform();
    return static_cast<std::uint64_t>(std::floor(std::log1p(-r) / std::log1p(-prob)));
  };
  auto within = [&](std::size_t base, std::size_t s, double prob) {
    if (prob <= 0.0 || s < 2) return;
    std::int64_t v = 1, w = -1;
    const auto ss = static_cast<std::int64_t>(s);
    while (v < ss) {
      w += 1 + static_cast<std::int64_t>(skip(prob));
      while (w >= v && v < ss) {
        w -= v;
        ++v;
      }
      if (v < ss) edges.emplace_back(static_cast<NodeId>(base + w), static_cast<NodeId>(base + v));
    }
  };
  auto across = [&](std::size_t a_base, std::size_t a, std::size_t b_base, std::size_t b, double prob) {
    if (prob <= 0.0) return;
    const std::uint64_t total = static_cast<std::uint64_t>(a) * b;
    std::uint64_t idx = 0;
    bool first = true;
    for (;;) {
      const auto step = skip(prob);
      idx = first ? step : idx + 1 + step;
      first = false;
      if (idx >= total) break;
      edges.emplace_back(static_cast<NodeId>(a_base + idx / b), static_cast<NodeId>(b_base + idx % b));
    }
  };
  within(0, m, intra_p);
  within(m, n - m, intra_p);
  across(0, m, m, n - m, inter_p);

  SyntheticGraph out;
  out.graph = Graph(n, edges);
  std::vector<std::uint64_t> label(n, 1);
  std::fill(label.begin(), label.begin() + static_cast<std::ptrdiff_t>(m), 0);
  out.planted = Partition(std::span<const std::uint64_t>(label), {"minority", "majority"});
  return out;
}

}  // namespace faircd
