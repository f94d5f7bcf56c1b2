#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "faircd/graph.hpp"
#include "faircd/partition.hpp"
#include "faircd/rng.hpp"
#include "oracles.hpp"

using namespace faircd;

namespace {

LoadedGraph parse(const std::string& text, IdMode mode = IdMode::raw) {
  std::istringstream in(text);
  return load_edge_list(in, mode);
}

Partition parse_part(const std::string& text, std::size_t n, const NodeMap* map = nullptr) {
  std::istringstream in(text);
  return load_partition(in, n, map);
}

}  // namespace

TEST(EdgeList, PathGraph) {
  const auto lg = parse("0 1\n1 2\n");
  EXPECT_EQ(lg.graph.num_nodes(), 3u);
  EXPECT_EQ(lg.graph.num_edges(), 2u);
  EXPECT_EQ(lg.graph.degree(1), 2u);
  EXPECT_EQ(degree(lg.graph, 0), 1u);
}

TEST(EdgeList, RemapDropsDuplicatesAndSelfLoops) {
  const auto lg = parse("a b\nb a\na a\n", IdMode::remap);
  EXPECT_EQ(lg.graph.num_nodes(), 2u);
  EXPECT_EQ(lg.graph.num_edges(), 1u);
  EXPECT_EQ(lg.graph.dropped_duplicates(), 1u);
  EXPECT_EQ(lg.graph.dropped_self_loops(), 1u);
  EXPECT_EQ(lg.mapping.tokens[0], "a");
  EXPECT_EQ(lg.mapping.tokens[1], "b");
}

TEST(EdgeList, CommentsBlankLinesAndExtraColumns) {
  const auto lg = parse("# header\n\n0 1 0.5\n  \n1\t2\n");
  EXPECT_EQ(lg.graph.num_edges(), 2u);
}

TEST(EdgeList, RawModeMaxIdDefinesN) {
  const auto lg = parse("0 5\n");
  EXPECT_EQ(lg.graph.num_nodes(), 6u);
  EXPECT_EQ(lg.graph.degree(3), 0u);
}

TEST(EdgeList, Errors) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("# only a comment\n"), ParseError);
  EXPECT_THROW(parse("0 1\n7\n"), ParseError);
  EXPECT_THROW(parse("0 x\n"), ParseError);
  try {
    parse("0 1\n7\n");
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Graph, StarDegreeAndIsolated) {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  Graph g(6, e);
  EXPECT_EQ(g.degree(0), 4u);
  EXPECT_EQ(g.degree(5), 0u);
  EXPECT_TRUE(g.has_edge(3, 0));
  EXPECT_FALSE(g.has_edge(3, 4));
  EXPECT_THROW(g.degree(6), ConfigError);
}

TEST(Graph, RoundTripThroughEdgeList) {
  std::mt19937_64 gen(3);
  const auto g = oracle::erdos_renyi(40, 0.1, gen);
  std::ostringstream os;
  write_edge_list(os, g);
  const auto back = parse(os.str());
  // Trailing isolated nodes are not representable in an edge list.
  EXPECT_EQ(back.graph.edges().size(), g.edges().size());
  EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), back.graph.edges().begin()));
}

TEST(Graph, SymmetricAndSimple) {
  std::mt19937_64 gen(11);
  const auto g = oracle::erdos_renyi(60, 0.2, gen);
  std::size_t deg_sum = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      EXPECT_NE(u, v);
      EXPECT_TRUE(g.has_edge(v, u));
    }
    deg_sum += g.degree(u);
  }
  EXPECT_EQ(deg_sum, 2 * g.num_edges());
}

TEST(PartitionIo, DenseRelabelInFirstAppearanceOrder) {
  const auto p = parse_part("0 7\n1 7\n2 9\n", 3);
  EXPECT_EQ(p.num_communities(), 2u);
  EXPECT_EQ(p[0], 0u);
  EXPECT_EQ(p[1], 0u);
  EXPECT_EQ(p[2], 1u);
  EXPECT_EQ(p.size_of(0), 2u);
}

TEST(PartitionIo, Errors) {
  try {
    parse_part("0 1\n1 1\n", 3);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("node 2 unassigned"), std::string::npos);
  }
  EXPECT_THROW(parse_part("0 1\n0 2\n1 1\n", 2), ParseError);
  EXPECT_THROW(parse_part("0 1\n5 1\n", 2), ParseError);
}

TEST(PartitionIo, RemapUsesNodeMap) {
  const auto lg = parse("x y\ny z\n", IdMode::remap);
  const auto p = parse_part("z 1\nx 2\ny 2\n", 3, &lg.mapping);
  EXPECT_EQ(p[0], p[1]);
  EXPECT_NE(p[0], p[2]);
  EXPECT_THROW(parse_part("w 1\nx 2\ny 2\n", 3, &lg.mapping), ParseError);
}

TEST(PartitionIo, WriteThenLoad) {
  Partition p{3, 3, 1, 0, 1};
  std::ostringstream os;
  write_partition(os, p);
  EXPECT_EQ(parse_part(os.str(), 5), p);
}

TEST(Partition, SingletonsAndOneCommunity) {
  const auto s = Partition::singletons(5);
  EXPECT_EQ(s.num_communities(), 5u);
  const auto o = Partition::one_community(5);
  EXPECT_EQ(o.num_communities(), 1u);
  EXPECT_EQ(o.size_of(0), 5u);
  EXPECT_THROW(o.label(5), ConfigError);
}

TEST(Contingency, IdentityIsDiagonal) {
  Partition p{0, 0, 1, 2, 2, 2};
  const ContingencyTable ct(p, p);
  EXPECT_EQ(ct.num_cells(), 3u);
  for (CommunityId a = 0; a < 3; ++a) EXPECT_EQ(ct.overlap(a, a), p.size_of(a));
}

TEST(Contingency, FullMerge) {
  const ContingencyTable ct(Partition{0, 0, 1, 1}, Partition{0, 0, 0, 0});
  EXPECT_EQ(ct.num_pred(), 1u);
  EXPECT_EQ(ct.overlap(0, 0), 2u);
  EXPECT_EQ(ct.overlap(1, 0), 2u);
}

TEST(Contingency, MatchesBruteForce) {
  std::mt19937_64 gen(50);
  for (int t = 0; t < 20; ++t) {
    const auto gt = oracle::random_partition(50, 1 + t % 7, gen);
    const auto pred = oracle::random_partition(50, 1 + (t * 3) % 11, gen);
    const ContingencyTable ct(gt, pred);
    std::size_t total = 0;
    for (CommunityId a = 0; a < ct.num_gt(); ++a) {
      for (CommunityId b = 0; b < ct.num_pred(); ++b) {
        const auto o = oracle::overlap(gt, pred, a, b);
        EXPECT_EQ(ct.overlap(a, b), o);
        total += o;
      }
    }
    EXPECT_EQ(total, 50u);
  }
}

TEST(Contingency, SizeMismatchThrows) {
  EXPECT_THROW(ContingencyTable(Partition{0, 1}, Partition{0, 1, 2}), ConfigError);
}

TEST(CcRow, Examples) {
  EXPECT_EQ(cc_row(Partition{0, 0, 1}, 0), (std::vector<double>{1, 1, 0}));
  EXPECT_EQ(cc_row(Partition::singletons(4), 2), (std::vector<double>{0, 0, 1, 0}));
  EXPECT_EQ(cc_row(Partition::one_community(3), 1), (std::vector<double>{1, 1, 1}));
}

TEST(CcRow, DotProductEqualsOverlap) {
  std::mt19937_64 gen(8);
  for (int t = 0; t < 10; ++t) {
    const auto gt = oracle::random_partition(200, 1 + t * 5, gen);
    const auto pred = oracle::random_partition(200, 1 + t * 9, gen);
    const ContingencyTable ct(gt, pred);
    for (NodeId i = 0; i < 200; i += 17) {
      const auto u = cc_row(gt, i), v = cc_row(pred, i);
      double dot = 0;
      for (std::size_t j = 0; j < u.size(); ++j) dot += u[j] * v[j];
      EXPECT_EQ(dot, static_cast<double>(ct.overlap(gt[i], pred[i])));
    }
  }
}

TEST(Rng, DeterministicAndBounded) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(c.below(7), 7u);
    const double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "a", 1));
  EXPECT_EQ(derive_seed(9, "x", 3), derive_seed(9, "x", 3));
}
