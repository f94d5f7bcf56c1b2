#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "faircd/common.hpp"
#include "faircd/graph.hpp"
#include "faircd/partition.hpp"
#include "faircd/rng.hpp"

namespace faircd {

/// Asynchronous label propagation.
///
/// Each sweep visits nodes in a fresh seeded order; a node keeps its label if
/// it is among the most frequent neighbor labels, otherwise it adopts one of
/// them chosen by the rng.
inline Partition label_propagation(const Graph& g, std::uint64_t seed, std::size_t max_sweeps = 100) {
  const std::size_t n = g.num_nodes();
  std::vector<CommunityId> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> count(n, 0);
  std::vector<CommunityId> touched, best;
  Rng rng(seed);

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    rng.shuffle(std::span<NodeId>(order));
    bool changed = false;
    for (NodeId u : order) {
      const auto nbrs = g.neighbors(u);
      if (nbrs.empty()) continue;
      touched.clear();
      for (NodeId v : nbrs) {
        if (count[label[v]]++ == 0) touched.push_back(label[v]);
      }
      std::size_t top = 0;
      for (auto c : touched) top = std::max(top, count[c]);
      best.clear();
      for (auto c : touched) {
        if (count[c] == top) best.push_back(c);
      }
      const bool keep = count[label[u]] == top;
      for (auto c : touched) count[c] = 0;
      if (keep) continue;
      label[u] = best[best.size() == 1 ? 0 : rng.below(best.size())];
      changed = true;
    }
    if (!changed) break;
  }
  return Partition(std::span<const CommunityId>(label));
}

namespace detail {

/// Weighted graph used by Louvain's aggregation levels. Intra-community
/// weight collapses into `loop`.
struct WeightedGraph {
  std::vector<std::vector<std::pair<NodeId, double>>> adj;
  std::vector<double> loop;

  std::size_t size() const { return adj.size(); }

  double strength(NodeId u) const {
    double k = 2.0 * loop[u];
    for (auto [v, w] : adj[u]) k += w;
    return k;
  }
};

inline WeightedGraph to_weighted(const Graph& g) {
  WeightedGraph wg;
  wg.adj.resize(g.num_nodes());
  wg.loop.assign(g.num_nodes(), 0.0);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) wg.adj[u].emplace_back(v, 1.0);
  }
  return wg;
}

/// Local-moving phase. Returns dense community ids and whether any node moved.
inline std::pair<std::vector<CommunityId>, bool> louvain_local_moves(const WeightedGraph& wg,
                                                                      double resolution, Rng& rng) {
  const std::size_t n = wg.size();
  std::vector<double> k(n), tot(n);
  double two_m = 0.0;
  for (NodeId u = 0; u < n; ++u) {
    k[u] = wg.strength(u);
    tot[u] = k[u];
    two_m += k[u];
  }
  std::vector<CommunityId> comm(n);
  std::iota(comm.begin(), comm.end(), 0);
  if (two_m == 0.0) return {comm, false};

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<NodeId>(order));

  std::vector<double> link(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<CommunityId> touched;
  bool any_move = false;
  constexpr double eps = 1e-12;
  for (std::size_t pass = 0; pass < 1000; ++pass) {
    bool moved = false;
    for (NodeId u : order) {
      const CommunityId own = comm[u];
      touched.clear();
      touched.push_back(own);
      seen[own] = 1;
      for (auto [v, w] : wg.adj[u]) {
        const CommunityId c = comm[v];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        link[c] += w;
      }
      tot[own] -= k[u];
      const double scale = resolution * k[u] / two_m;
      CommunityId best = own;
      double best_gain = link[own] - scale * tot[own];
      for (std::size_t t = 1; t < touched.size(); ++t) {
        const CommunityId c = touched[t];
        const double gain = link[c] - scale * tot[c];
        if (gain > best_gain + eps) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += k[u];
      for (auto c : touched) {
        link[c] = 0.0;
        seen[c] = 0;
      }
      if (best != own) {
        comm[u] = best;
        moved = true;
        any_move = true;
      }
    }
    if (!moved) break;
  }

  std::vector<CommunityId> dense(n, UINT32_MAX);
  CommunityId next = 0;
  for (auto& c : comm) {
    if (dense[c] == UINT32_MAX) dense[c] = next++;
    c = dense[c];
  }
  return {comm, any_move};
}

inline WeightedGraph aggregate(const WeightedGraph& wg, const std::vector<CommunityId>& comm) {
  const std::size_t k = *std::max_element(comm.begin(), comm.end()) + 1;
  WeightedGraph out;
  out.adj.resize(k);
  out.loop.assign(k, 0.0);
  std::vector<std::map<NodeId, double>> acc(k);
  for (NodeId u = 0; u < wg.size(); ++u) {
    out.loop[comm[u]] += wg.loop[u];
    for (auto [v, w] : wg.adj[u]) {
      if (comm[u] == comm[v]) {
        out.loop[comm[u]] += 0.5 * w;  // each undirected edge is seen twice
      } else {
        acc[comm[u]][comm[v]] += w;
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c) out.adj[c].assign(acc[c].begin(), acc[c].end());
  return out;
}

}  // namespace detail

/// Two-phase Louvain modularity optimization (local moves, then
/// aggregation) until a level produces no move. Node order is seeded.
inline Partition louvain(const Graph& g, std::uint64_t seed, double resolution = 1.0) {
  Rng rng(seed);
  auto wg = detail::to_weighted(g);
  std::vector<CommunityId> assignment(g.num_nodes());
  std::iota(assignment.begin(), assignment.end(), 0);
  for (;;) {
    auto [comm, moved] = detail::louvain_local_moves(wg, resolution, rng);
    if (!moved) break;
    for (auto& a : assignment) a = comm[a];
    wg = detail::aggregate(wg, comm);
  }
  return Partition(std::span<const CommunityId>(assignment));
}

/// Clauset-Newman-Moore greedy agglomeration.
///
/// Starting from singletons, merges the adjacent pair with the largest
/// modularity gain until no merge has positive gain. Gains are compared in
/// exact integer form, 2m*L_ij - d_i*d_j, and ties go to the
/// lexicographically smallest (i, j), so the result is fully deterministic.
inline Partition greedy_agglomerative(const Graph& g) {
  const std::size_t n = g.num_nodes();
  const auto two_m = static_cast<std::int64_t>(2 * g.num_edges());
  std::vector<std::unordered_map<CommunityId, std::int64_t>> links(n);
  std::vector<std::int64_t> deg(n);
  std::vector<bool> alive(n, true);
  std::vector<CommunityId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (NodeId u = 0; u < n; ++u) deg[u] = static_cast<std::int64_t>(g.degree(u));
  for (auto [u, v] : g.edges()) {
    links[u][v] += 1;
    links[v][u] += 1;
  }

  struct Entry {
    std::int64_t gain;
    CommunityId i, j;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    if (a.i != b.i) return a.i > b.i;
    return a.j > b.j;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  auto gain_of = [&](CommunityId i, CommunityId j, std::int64_t l) {
    return two_m * l - deg[i] * deg[j];
  };
  for (auto [u, v] : g.edges()) heap.push({gain_of(u, v, 1), u, v});

  while (!heap.empty()) {
    const Entry e = heap.top();
    heap.pop();
    if (!alive[e.i] || !alive[e.j]) continue;
    auto it = links[e.i].find(e.j);
    if (it == links[e.i].end() || gain_of(e.i, e.j, it->second) != e.gain) continue;
    if (e.gain <= 0) break;

    // Merge j into i.
    const CommunityId i = e.i, j = e.j;
    alive[j] = false;
    parent[j] = i;
    deg[i] += deg[j];
    links[i].erase(j);
    for (auto [c, l] : links[j]) {
      if (c == i) continue;
      links[i][c] += l;
      auto& back = links[c];
      back.erase(j);
      back[i] += l;
    }
    links[j].clear();
    for (auto [c, l] : links[i]) {
      heap.push({gain_of(std::min(i, c), std::max(i, c), l), std::min(i, c), std::max(i, c)});
    }
  }

  std::vector<CommunityId> root(n);
  for (NodeId u = 0; u < n; ++u) {
    CommunityId r = u;
    while (parent[r] != r) r = parent[r];
    root[u] = r;
  }
  return Partition(std::span<const CommunityId>(root));
}

/// Detector name plus string parameters, e.g. "louvain:seed=3,resolution=1".
struct DetectorSpec {
  std::string name;
  std::map<std::string, std::string> params;

  /// Display label: the name, or the value of an explicit "label" param.
  std::string label() const {
    auto it = params.find("label");
    return it != params.end() ? it->second : name;
  }

  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = params.find(key);
    return it != params.end() ? it->second : fallback;
  }

  std::string to_string() const {
    std::string s = name;
    char sep = ':';
    for (const auto& [k, v] : params) {
      s += sep;
      s += k + "=" + v;
      sep = ',';
    }
    return s;
  }
};

inline DetectorSpec parse_detector_spec(std::string_view text) {
  DetectorSpec spec;
  const auto colon = text.find(':');
  spec.name = std::string(detail::trim(text.substr(0, colon)));
  if (spec.name.empty()) throw ConfigError("empty detector name");
  if (colon == std::string_view::npos) return spec;
  auto rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto kv = rest.substr(0, comma);
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("detector parameter '" + std::string(kv) + "' is not key=value");
    }
    spec.params[std::string(detail::trim(kv.substr(0, eq)))] = std::string(detail::trim(kv.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return spec;
}

namespace detail {

inline std::uint64_t param_u64(const DetectorSpec& s, const std::string& key, std::uint64_t fallback) {
  auto it = s.params.find(key);
  if (it == s.params.end()) return fallback;
  std::uint64_t v;
  if (!parse_uint(it->second, v)) {
    throw ConfigError("detector " + s.name + ": parameter " + key + " must be a non-negative integer");
  }
  return v;
}

inline double param_double(const DetectorSpec& s, const std::string& key, double fallback) {
  auto it = s.params.find(key);
  if (it == s.params.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("detector " + s.name + ": parameter " + key + " must be a number");
  }
}

}  // namespace detail

/// Runs a built-in detector or loads an external partition
/// (`external:path=FILE`). `map` resolves node tokens in external files.
inline Partition run_detector(const DetectorSpec& spec, const Graph& g, const NodeMap* map = nullptr) {
  if (spec.name == "label_propagation" || spec.name == "lpa") {
    return label_propagation(g, detail::param_u64(spec, "seed", 0),
                             detail::param_u64(spec, "max_sweeps", 100));
  }
  if (spec.name == "louvain") {
    return louvain(g, detail::param_u64(spec, "seed", 0), detail::param_double(spec, "resolution", 1.0));
  }
  if (spec.name == "cnm" || spec.name == "greedy_agglomerative") return greedy_agglomerative(g);
  if (spec.name == "external") {
    auto it = spec.params.find("path");
    if (it == spec.params.end()) throw ConfigError("external detector requires path=FILE");
    std::ifstream in(it->second);
    if (!in) throw IoError("cannot open partition file " + it->second);
    return load_partition(in, g.num_nodes(), map);
  }
  throw ConfigError("unknown detector '" + spec.name +
                    "' (expected label_propagation|louvain|cnm|external)");
}

}  // namespace faircd
