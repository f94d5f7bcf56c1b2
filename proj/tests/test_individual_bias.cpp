#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "faircd/individual_bias.hpp"
#include "oracles.hpp"

using namespace faircd;

TEST(CosineDistance, Examples) {
  const std::vector<double> a{1, 1, 0}, b{1, 0}, c{0, 1};
  EXPECT_EQ(cosine_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(cosine_distance(b, c), 1.0);
  const std::vector<double> u{1, 1, 0, 0}, v{1, 1, 1, 1};
  EXPECT_NEAR(cosine_distance(u, v), 1.0 - 2.0 / (std::sqrt(2.0) * 2.0), 1e-15);
}

TEST(CosineDistance, Errors) {
  const std::vector<double> a{1, 1}, b{1, 1, 1}, z{0, 0};
  EXPECT_THROW(cosine_distance(a, b), ConfigError);
  EXPECT_THROW(cosine_distance(a, z), ConfigError);
}

TEST(IbFromCounts, ClosedForms) {
  EXPECT_EQ(ib_from_counts(7, 7, 7), 0.0);
  EXPECT_NEAR(ib_from_counts(20, 20, 100), 1.0 - std::sqrt(0.2), 1e-15);
  EXPECT_NEAR(ib_from_counts(80, 80, 100), 1.0 - std::sqrt(0.8), 1e-15);
  EXPECT_NEAR(ib_from_counts(1, 2000, 1), 1.0 - 1.0 / std::sqrt(2000.0), 1e-15);
  EXPECT_NEAR(ib_from_counts(1, 20, 81), 1.0 - 1.0 / std::sqrt(20.0 * 81.0), 1e-15);
}

TEST(IbFromCountsDeath, ZeroOverlapAborts) {
  EXPECT_DEATH(ib_from_counts(0, 3, 3), "overlap");
}

TEST(IbAll, PerfectPredictionIsZero) {
  std::mt19937_64 gen(1);
  const auto p = oracle::random_partition(300, 12, gen);
  const auto r = ib_all_fast(p, p);
  for (double x : r.ib) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(r.ib_g, 0.0);
  EXPECT_EQ(r.mean_ib, 0.0);
}

TEST(IbAll, OneCommunityPrediction) {
  std::vector<CommunityId> raw(100, 1);
  for (int i = 0; i < 20; ++i) raw[i] = 0;
  const Partition gt{std::span<const CommunityId>(raw)};
  const auto r = ib_all_fast(gt, Partition::one_community(100));
  const double lo = 1 - std::sqrt(0.8), hi = 1 - std::sqrt(0.2);
  EXPECT_NEAR(r.ib[0], hi, 1e-15);
  EXPECT_NEAR(r.ib[99], lo, 1e-15);
  // Two-level vector: std = |hi - lo| * sqrt(0.2 * 0.8).
  EXPECT_NEAR(r.ib_g, (hi - lo) * 0.4, 1e-12);
  EXPECT_NEAR(r.gt_community_mean[0], hi, 1e-15);
  EXPECT_NEAR(r.gt_community_mean[1], lo, 1e-15);
}

TEST(IbAll, HandExample) {
  const auto r = ib_all_naive(Partition{0, 0, 1}, Partition{0, 1, 1});
  EXPECT_NEAR(r.ib[0], 1 - 1 / std::sqrt(2.0), 1e-15);
  const auto same = ib_all_naive(Partition{0, 0, 1}, Partition{4, 4, 2});
  for (double x : same.ib) EXPECT_EQ(x, 0.0);
}

TEST(IbAll, FastMatchesNaiveAndLiteralOracle) {
  std::mt19937_64 gen(77);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 100;
    const auto gt = oracle::random_partition(n, 1 + gen() % n, gen);
    const auto pred = oracle::random_partition(n, 1 + gen() % n, gen);
    const auto fast = ib_all_fast(gt, pred);
    const auto naive = ib_all_naive(gt, pred);
    const auto literal = oracle::ib_naive(gt, pred);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(fast.ib[i], naive.ib[i], 1e-12);
      EXPECT_NEAR(fast.ib[i], literal[i], 1e-12);
    }
    EXPECT_NEAR(fast.ib_g, naive.ib_g, 1e-12);
  }
}

TEST(IbAll, WorkersDoNotChangeBits) {
  std::mt19937_64 gen(5);
  const auto gt = oracle::random_partition(5000, 40, gen);
  const auto pred = oracle::random_partition(5000, 25, gen);
  const auto one = ib_all_fast(gt, pred, 1);
  const auto many = ib_all_fast(gt, pred, 8);
  EXPECT_EQ(one.ib, many.ib);
  EXPECT_EQ(one.ib_g, many.ib_g);
}

TEST(IbAll, RangeInvariants) {
  std::mt19937_64 gen(19);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + gen() % 150;
    const auto gt = oracle::random_partition(n, 1 + gen() % n, gen);
    const auto pred = oracle::random_partition(n, 1 + gen() % n, gen);
    const auto r = ib_all_fast(gt, pred);
    for (double x : r.ib) {
      EXPECT_GE(x, 0.0);
      EXPECT_LT(x, 1.0);
    }
    EXPECT_GE(r.ib_g, 0.0);
    EXPECT_LE(r.ib_g, 0.5);
  }
}

TEST(IbAll, LabelPermutationInvariance) {
  std::mt19937_64 gen(23);
  const auto gt = oracle::random_partition(80, 6, gen);
  const auto pred = oracle::random_partition(80, 9, gen);
  std::vector<std::uint64_t> shuffled(80);
  for (NodeId i = 0; i < 80; ++i) shuffled[i] = 1000 - 7 * pred[i];
  const auto a = ib_all_fast(gt, pred);
  const auto b = ib_all_fast(gt, Partition(std::span<const std::uint64_t>(shuffled)));
  EXPECT_EQ(a.ib, b.ib);
}

TEST(IbAll, Errors) {
  EXPECT_THROW(ib_all_fast(Partition{0, 1}, Partition{0, 1, 1}), ConfigError);
  const auto big = Partition::one_community(kDefaultNaiveCap + 1);
  EXPECT_THROW(ib_all_naive(big, big), ConfigError);
  EXPECT_NO_THROW(ib_all_naive(big, big, kDefaultNaiveCap + 1));
}

TEST(IbOutput, CsvAndJson) {
  const auto r = ib_all_fast(Partition{0, 0, 1}, Partition{0, 1, 1});
  std::ostringstream csv, js;
  write_bias_csv(csv, r);
  EXPECT_EQ(csv.str().substr(0, 11), "node_id,ib\n");
  EXPECT_NE(csv.str().find("\n2,"), std::string::npos);
  write_bias_summary_json(js, r);
  EXPECT_NE(js.str().find("\"ib_g\""), std::string::npos);
  EXPECT_NE(js.str().find("\"k_pred\""), std::string::npos);
}
