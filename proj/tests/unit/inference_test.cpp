#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sshmt/inference.hpp"
#include "sshmt/regions.hpp"

namespace sshmt {
namespace {

// leaves a=0, b=1, c=2; d=3=(a,b); e=4=(d,c)
MergeTree three_leaf() {
  const std::vector<std::pair<NodeId, NodeId>> merges{{0, 1}, {3, 2}};
  return MergeTree::from_merges(3, merges);
}

TEST(NodePotentials, ThreeLeafExample) {
  const auto u = node_potentials(three_leaf(), std::vector<double>{0, 0, 0, 0.9, 0.2});
  const std::vector<double> expected{0.1, 0.1, 0.8, 0.72, 0.2};
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(u[i], expected[i], 1e-15) << i;
}

TEST(NodePotentials, ProductWithParentSplit) {
  // chain: leaves 0,1,2; 3=(0,1); 4=(3,2)
  const auto u = node_potentials(three_leaf(), std::vector<double>{0.5, 0.5, 0.5, 0.8, 0.3});
  EXPECT_NEAR(u[3], 0.56, 1e-15);
  EXPECT_NEAR(u[4], 0.3, 1e-15);
  EXPECT_NEAR(u[2], 0.7, 1e-15);  // leaf entries are ignored, f pinned at 1
}

TEST(NodePotentials, MissingPrediction) {
  for (const std::vector<double>& bad :
       {std::vector<double>{0, 0, 0, 0.5}, std::vector<double>{0, 0, 0, NAN, 0.5}, std::vector<double>{0, 0, 0, 1.5, 0.5}}) {
    try {
      node_potentials(three_leaf(), bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::MissingPrediction);
    }
  }
  // NaN on a leaf entry is ignored
  EXPECT_NO_THROW(node_potentials(three_leaf(), std::vector<double>{NAN, 0, 0, 0.5, 0.5}));
}

TEST(GreedyLabel, ThreeLeafExample) {
  const auto u = node_potentials(three_leaf(), std::vector<double>{0, 0, 0, 0.9, 0.2});
  EXPECT_EQ(greedy_label(three_leaf(), u), (NodeLabels{0, 0, 1, 1, 0}));
}

TEST(GreedyLabel, RootMaximal) {
  EXPECT_EQ(greedy_label(three_leaf(), std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.9}), (NodeLabels{0, 0, 0, 0, 1}));
}

TEST(GreedyLabel, LeavesMaximal) {
  EXPECT_EQ(greedy_label(three_leaf(), std::vector<double>{0.1, 0.2, 0.3, 0.0, 0.0}), (NodeLabels{1, 1, 1, 0, 0}));
}

TEST(GreedyLabel, TiesPickSmallerId) {
  // a (id 0) and d (id 3) tie; a wins, then b, then c
  EXPECT_EQ(greedy_label(three_leaf(), std::vector<double>{0.5, 0.1, 0.1, 0.5, 0.0}), (NodeLabels{1, 1, 1, 0, 0}));
  // d (3) and c (2) tie at the top: c first, then d
  EXPECT_EQ(greedy_label(three_leaf(), std::vector<double>{0.0, 0.0, 0.5, 0.5, 0.0}), (NodeLabels{0, 0, 1, 1, 0}));
}

TEST(GreedyLabel, AlwaysRegionConsistent) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 20; ++t) {
    const MergeTree tree = oracle::random_tree(rng, 2 + rng() % 20);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> pot(tree.size());
      for (auto& p : pot) p = k % 10 == 0 ? std::round(u(rng) * 3) / 3 : u(rng);  // some ties
      const NodeLabels z = greedy_label(tree, pot);
      ASSERT_TRUE(is_region_consistent(tree, z));
      EXPECT_TRUE(check_merge_consistency(tree, z_to_y(tree, z)));
    }
  }
}

TEST(Segmentation, PaintsSelectedRegions) {
  const MergeTree t = three_leaf();
  const LabelMap sp(Dims{3, 2, 1}, std::vector<std::uint32_t>{1, 2, 3, 3, 2, 1});
  const LabelMap root = segmentation_from_z(t, NodeLabels{0, 0, 0, 0, 1}, sp);
  for (auto v : root) EXPECT_EQ(v, 1u);
  const LabelMap leaves = segmentation_from_z(t, NodeLabels{1, 1, 1, 0, 0}, sp);
  EXPECT_TRUE((oracle::same_partition<std::uint32_t, std::uint32_t>(leaves.values(), sp.values())));
  const LabelMap cd = segmentation_from_z(t, NodeLabels{0, 0, 1, 1, 0}, sp);
  // c (id 2) gets label 1, d (id 3) label 2
  EXPECT_EQ(cd, LabelMap(Dims{3, 2, 1}, std::vector<std::uint32_t>{2, 2, 1, 1, 2, 2}));
}

TEST(Segmentation, InconsistentZRejected) {
  const LabelMap sp(Dims{3, 1, 1}, std::vector<std::uint32_t>{1, 2, 3});
  try {
    segmentation_from_z(three_leaf(), NodeLabels{1, 0, 1, 1, 0}, sp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InconsistentZ);
  }
}

TEST(Segmentation, RandomSelectionsPartitionTheImage) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + rng() % 10;
    const MergeTree tree = oracle::random_tree(rng, n);
    LabelMap sp = oracle::random_labels(rng, Dims{6, 5, 1}, std::uint32_t(n));
    for (std::uint32_t l = 1; l <= n; ++l) sp[l - 1] = l;
    std::vector<double> pot(tree.size());
    for (auto& p : pot) p = u(rng);
    const NodeLabels z = greedy_label(tree, pot);
    const LabelMap seg = segmentation_from_z(tree, z, sp);
    const auto used = distinct_labels(seg);
    const auto selected = static_cast<std::size_t>(std::count(z.begin(), z.end(), 1));
    EXPECT_EQ(used.front(), 1u);
    EXPECT_EQ(used.size(), selected);
    EXPECT_EQ(used.back(), selected);
    for (std::size_t v = 0; v < sp.size(); ++v) {
      // voxels of the same superpixel always share a segment
      for (std::size_t w = 0; w < sp.size(); ++w) {
        if (sp[v] == sp[w]) {
          EXPECT_EQ(seg[v], seg[w]);
        }
      }
    }
  }
}

}  // namespace
}  // namespace sshmt
