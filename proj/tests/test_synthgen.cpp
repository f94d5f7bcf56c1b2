#include <gtest/gtest.h>

#include <cmath>

#include "faircd/synthgen.hpp"

using namespace faircd;

namespace {

double inter_fraction(const SyntheticGraph& sg) {
  std::size_t inter = 0;
  for (auto [u, v] : sg.graph.edges()) inter += sg.planted[u] != sg.planted[v];
  return static_cast<double>(inter) / static_cast<double>(sg.graph.num_edges());
}

AbcdParams small(double xi, std::uint64_t seed) {
  AbcdParams p;
  p.n = 500;
  p.c_min = 50;
  p.c_max = 150;
  p.xi = xi;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(Abcd, Deterministic) {
  const auto a = generate_abcd_lite(small(0.2, 4));
  const auto b = generate_abcd_lite(small(0.2, 4));
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.planted, b.planted);
  const auto c = generate_abcd_lite(small(0.2, 5));
  EXPECT_FALSE(a.graph == c.graph);
}

TEST(Abcd, CommunitySizesWithinBounds) {
  const auto sg = generate_abcd_lite(small(0.3, 2));
  std::size_t total = 0;
  for (auto s : sg.planted.sizes()) {
    EXPECT_GE(s, 50u);
    EXPECT_LE(s, 150u);
    total += s;
  }
  EXPECT_EQ(total, 500u);
}

TEST(Abcd, DegreesWithinBoundsAndGraphSimple) {
  const auto sg = generate_abcd_lite(small(0.3, 8));
  for (NodeId u = 0; u < sg.graph.num_nodes(); ++u) {
    EXPECT_LE(sg.graph.degree(u), 50u);
    for (NodeId v : sg.graph.neighbors(u)) {
      EXPECT_NE(u, v);
      EXPECT_TRUE(sg.graph.has_edge(v, u));
    }
  }
  EXPECT_EQ(sg.graph.dropped_duplicates(), 0u);
  EXPECT_EQ(sg.graph.dropped_self_loops(), 0u);
}

TEST(Abcd, XiZeroHasNoInterEdges) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_EQ(inter_fraction(generate_abcd_lite(small(0.0, seed))), 0.0);
  }
}

TEST(Abcd, MixingTracksXi) {
  for (double xi : {0.2, 0.5}) {
    EXPECT_NEAR(inter_fraction(generate_abcd_lite(small(xi, 3))), xi, 0.06);
  }
}

TEST(Abcd, XiOneLeavesNoCommunitySignal) {
  auto p = small(1.0, 1);
  p.n = 2000;
  p.c_max = 400;
  const auto sg = generate_abcd_lite(p);
  // With no community stubs the planting is unrelated to edges: the
  // inter-community share equals the chance level 1 - sum (s_c/n)^2 roughly.
  double same = 0.0;
  for (auto s : sg.planted.sizes()) same += std::pow(static_cast<double>(s) / 2000.0, 2);
  EXPECT_NEAR(inter_fraction(sg), 1.0 - same, 0.05);
}

TEST(Abcd, DefaultParameters) {
  AbcdParams p;  // n = 10000, c in [100, 1000], xi = 0.2
  const auto sg = generate_abcd_lite(p);
  const double mean_degree = 2.0 * sg.graph.num_edges() / static_cast<double>(p.n);
  EXPECT_GE(mean_degree, 5.0);
  EXPECT_LE(mean_degree, 50.0);
  EXPECT_GE(sg.planted.num_communities(), 10u);
  EXPECT_LE(sg.planted.num_communities(), 100u);
  EXPECT_NEAR(inter_fraction(sg), 0.2, 0.05);
}

TEST(Abcd, Validation) {
  auto p = small(1.5, 0);
  EXPECT_THROW(generate_abcd_lite(p), ConfigError);
  p = small(0.2, 0);
  p.c_min = 200;
  EXPECT_THROW(generate_abcd_lite(p), ConfigError);
  p = small(0.2, 0);
  p.d_max = 600;
  EXPECT_THROW(generate_abcd_lite(p), ConfigError);
  p = small(0.2, 0);
  p.gamma = 0;
  EXPECT_THROW(generate_abcd_lite(p), ConfigError);
}

TEST(TruncatedPowerLaw, StaysInRange) {
  Rng rng(3);
  const detail::TruncatedPowerLaw law(5, 50, 2.5);
  for (int i = 0; i < 2000; ++i) {
    const auto x = law(rng);
    EXPECT_GE(x, 5u);
    EXPECT_LE(x, 50u);
  }
}

TEST(TwoCommunity, PlantedSizes) {
  const auto sg = generate_two_community(100, 0.2, 0.1, 0.01, 0);
  EXPECT_EQ(sg.planted.size_of(0), 20u);
  EXPECT_EQ(sg.planted.size_of(1), 80u);
  for (NodeId i = 0; i < 20; ++i) EXPECT_EQ(sg.planted[i], 0u);
  EXPECT_EQ(sg.planted.original_id(0), "minority");
}

TEST(TwoCommunity, CliquesWhenDense) {
  const auto sg = generate_two_community(30, 0.2, 1.0, 0.0, 1);
  EXPECT_EQ(sg.graph.num_edges(), 6u * 5 / 2 + 24u * 23 / 2);
  for (auto [u, v] : sg.graph.edges()) EXPECT_EQ(sg.planted[u], sg.planted[v]);
}

TEST(TwoCommunity, Errors) {
  EXPECT_THROW(generate_two_community(100, 0.0, 0.1, 0.01, 0), ConfigError);
  EXPECT_THROW(generate_two_community(100, 0.2, 1.5, 0.01, 0), ConfigError);
}
