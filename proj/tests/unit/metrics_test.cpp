#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sshmt/metrics.hpp"

namespace sshmt {
namespace {

LabelMap row(std::vector<std::uint32_t> v) {
  const auto n = static_cast<std::uint32_t>(v.size());
  return LabelMap(Dims{n, 1, 1}, std::move(v));
}

TEST(AdaptedRand, WorkedExample) {
  const RandScores s = adapted_rand(row({1, 1, 1, 2}), row({1, 1, 2, 2}));
  EXPECT_EQ(s.error, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.precision, 0.6);
  EXPECT_DOUBLE_EQ(s.recall, 0.75);
}

TEST(AdaptedRand, UnderSegmentation) {
  const RandScores s = adapted_rand(row({5, 5, 5, 5}), row({1, 1, 2, 2}));
  EXPECT_DOUBLE_EQ(s.precision, 0.5);
  EXPECT_DOUBLE_EQ(s.recall, 1.0);
  EXPECT_EQ(s.error, 1.0 / 3.0);
}

TEST(AdaptedRand, PermutedLabelsScorePerfectly) {
  EXPECT_EQ(adapted_rand_error(row({7, 7, 3, 9}), row({1, 1, 2, 3})), 0.0);
}

TEST(AdaptedRand, ZeroGroundTruthIgnoredByDefault) {
  const LabelMap seg = row({1, 2, 1, 1});
  const LabelMap gt = row({1, 0, 0, 1});
  EXPECT_EQ(adapted_rand_error(seg, gt), 0.0);
  EXPECT_GT(adapted_rand_error(seg, gt, false), 0.0);
}

TEST(AdaptedRand, EmptyPartitions) {
  EXPECT_EQ(adapted_rand_error(row({1, 2}), row({0, 0})), 0.0);
  ContingencyTable only_rows;
  EXPECT_EQ(only_rows.scores().error, 0.0);
}

TEST(AdaptedRand, DimsMismatch) {
  EXPECT_THROW(adapted_rand_error(row({1, 2}), row({1, 2, 3})), Error);
}

TEST(AdaptedRand, MatchesPairwiseOracle) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 50; ++t) {
    const Dims d{std::uint32_t(1 + rng() % 16), std::uint32_t(1 + rng() % 16), 1};
    const LabelMap seg = oracle::random_labels(rng, d, 1 + rng() % 6);
    const LabelMap gt = oracle::random_labels(rng, d, 1 + rng() % 6, t % 2 == 0);
    EXPECT_NEAR(adapted_rand_error(seg, gt), oracle::pairwise_are(seg, gt), 1e-12);
    EXPECT_NEAR(adapted_rand_error(seg, gt, false), oracle::pairwise_are(seg, gt, false), 1e-12);
  }
}

TEST(AdaptedRand, SymmetricAndRelabelInvariant) {
  std::mt19937_64 rng(20);
  for (int t = 0; t < 30; ++t) {
    const Dims d{10, 7, 1};
    const LabelMap a = oracle::random_labels(rng, d, 4);
    const LabelMap b = oracle::random_labels(rng, d, 5);
    const RandScores ab = adapted_rand(a, b, false), ba = adapted_rand(b, a, false);
    EXPECT_NEAR(ab.error, ba.error, 1e-15);
    EXPECT_EQ(ab.precision, ba.recall);
    LabelMap relabeled = a;
    for (auto& v : relabeled) v = 100 - 3 * v;
    EXPECT_EQ(adapted_rand_error(relabeled, b), adapted_rand_error(a, b));
  }
}

TEST(Jaccard, Examples) {
  const std::vector<std::size_t> a{1, 2, 3}, b{2, 3, 4}, c{7, 8}, empty;
  EXPECT_EQ(jaccard(a, a), 1.0);
  EXPECT_EQ(jaccard(a, b), 0.5);
  EXPECT_EQ(jaccard(a, c), 0.0);
  EXPECT_EQ(jaccard(empty, empty), 1.0);
  EXPECT_EQ(jaccard(std::vector<std::size_t>{3, 1, 2, 2}, b), 0.5);  // unsorted input, duplicates
}

}  // namespace
}  // namespace sshmt
