#pragma once

// Slow, obviously-correct reference implementations used only by tests.
// Each works from node pairs or explicit sets and shares no code with the
// library beyond the Graph/Partition containers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "faircd/graph.hpp"
#include "faircd/partition.hpp"

namespace oracle {

using faircd::Graph;
using faircd::NodeId;
using faircd::Partition;

inline Partition random_partition(std::size_t n, std::size_t k, std::mt19937_64& gen) {
  std::uniform_int_distribution<std::uint64_t> d(0, k - 1);
  std::vector<std::uint64_t> raw(n);
  for (auto& x : raw) x = d(gen);
  return Partition(std::span<const std::uint64_t>(raw));
}

inline Graph erdos_renyi(std::size_t n, double p, std::mt19937_64& gen) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (coin(gen)) e.emplace_back(u, v);
    }
  }
  return Graph(n, e);
}

inline std::vector<std::set<NodeId>> groups(const Partition& p) {
  std::map<std::uint32_t, std::set<NodeId>> m;
  for (NodeId i = 0; i < p.num_nodes(); ++i) m[p[i]].insert(i);
  std::vector<std::set<NodeId>> out;
  for (auto& [k, s] : m) out.push_back(std::move(s));
  return out;
}

/// Overlap count between gt community a and pred community b by scanning nodes.
inline std::size_t overlap(const Partition& gt, const Partition& pred, std::uint32_t a, std::uint32_t b) {
  std::size_t o = 0;
  for (NodeId i = 0; i < gt.num_nodes(); ++i) o += gt[i] == a && pred[i] == b;
  return o;
}

/// Materialized co-occurrence rows and a literal cosine distance.
inline std::vector<double> ib_naive(const Partition& gt, const Partition& pred) {
  const std::size_t n = gt.num_nodes();
  std::vector<double> out(n);
  for (NodeId i = 0; i < n; ++i) {
    double dot = 0, nu = 0, nv = 0;
    for (NodeId j = 0; j < n; ++j) {
      const double u = gt[i] == gt[j], v = pred[i] == pred[j];
      dot += u * v;
      nu += u * u;
      nv += v * v;
    }
    out[i] = 1.0 - dot / std::sqrt(nu * nv);
  }
  return out;
}

/// Q = 1/2m * sum_ij (A_ij - k_i k_j / 2m) delta(c_i, c_j), over all ordered pairs.
inline double modularity(const Graph& g, const Partition& p) {
  const double two_m = 2.0 * static_cast<double>(g.num_edges());
  double q = 0.0;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (NodeId j = 0; j < g.num_nodes(); ++j) {
      if (p[i] != p[j]) continue;
      const double a = g.has_edge(i, j) ? 1.0 : 0.0;
      q += a - static_cast<double>(g.degree(i)) * static_cast<double>(g.degree(j)) / two_m;
    }
  }
  return q / two_m;
}

/// ARI from an explicit enumeration of node pairs:
/// 2(ad - bc) / ((a+b)(b+d) + (a+c)(c+d)).
inline double ari(const Partition& x, const Partition& y) {
  double a = 0, b = 0, c = 0, d = 0;
  for (NodeId i = 0; i < x.num_nodes(); ++i) {
    for (NodeId j = i + 1; j < x.num_nodes(); ++j) {
      const bool sx = x[i] == x[j], sy = y[i] == y[j];
      if (sx && sy) ++a;
      else if (sx) ++b;
      else if (sy) ++c;
      else ++d;
    }
  }
  const double den = (a + b) * (b + d) + (a + c) * (c + d);
  if (den == 0.0) return 1.0;
  return 2.0 * (a * d - b * c) / den;
}

/// NMI with the arithmetic-mean normalizer from joint label frequencies.
inline double nmi_arithmetic(const Partition& x, const Partition& y) {
  const double n = static_cast<double>(x.num_nodes());
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
  std::map<std::uint32_t, double> px, py;
  for (NodeId i = 0; i < x.num_nodes(); ++i) {
    joint[{x[i], y[i]}] += 1 / n;
    px[x[i]] += 1 / n;
    py[y[i]] += 1 / n;
  }
  double hx = 0, hy = 0, mi = 0;
  for (auto [k, p] : px) hx -= p * std::log(p);
  for (auto [k, p] : py) hy -= p * std::log(p);
  for (auto [k, p] : joint) mi += p * std::log(p / (px[k.first] * py[k.second]));
  if (hx == 0 && hy == 0) return 1.0;
  if (hx == 0 || hy == 0) return 0.0;
  return mi / (0.5 * (hx + hy));
}

inline double f1(const std::set<NodeId>& a, const std::set<NodeId>& b) {
  std::size_t o = 0;
  for (auto v : a) o += b.count(v);
  if (o == 0) return 0.0;
  const double p = static_cast<double>(o) / b.size(), r = static_cast<double>(o) / a.size();
  return 2 * p * r / (p + r);
}

/// NF1 by trying every ground-truth community for every predicted community.
/// The match is the gt community of largest overlap (smallest id on ties).
inline double nf1(const Partition& gt, const Partition& pred) {
  const auto G = groups(gt), P = groups(pred);
  std::set<std::size_t> matched;
  double sum = 0;
  for (const auto& b : P) {
    std::size_t best = 0, best_o = 0;
    for (std::size_t a = 0; a < G.size(); ++a) {
      std::size_t o = 0;
      for (auto v : b) o += G[a].count(v);
      if (o > best_o) {
        best_o = o;
        best = a;
      }
    }
    matched.insert(best);
    sum += f1(G[best], b);
  }
  const double coverage = static_cast<double>(matched.size()) / G.size();
  const double redundancy = static_cast<double>(P.size()) / matched.size();
  return sum / P.size() * coverage / redundancy;
}

/// All set partitions of {0..n-1} as restricted growth strings.
inline std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  std::vector<std::uint64_t> a(n, 0), mx(n, 0);
  for (;;) {
    out.emplace_back(std::span<const std::uint64_t>(a));
    std::size_t i = n;
    while (i-- > 1) {
      if (a[i] <= mx[i - 1]) break;
    }
    if (i == 0 || i >= n) return out;
    ++a[i];
    mx[i] = std::max(mx[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      mx[j] = mx[i];
    }
  }
}

}  // namespace oracle
