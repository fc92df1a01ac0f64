#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sshmt/grid.hpp"
#include "sshmt/merge_tree.hpp"

namespace sshmt {

enum class LabelSource : std::uint8_t { None, FullGt, PerSegment, LeafFixed };

/// Training labels per clique (indexed by node id). Leaf cliques are always 1.
struct LabelAssignment {
  NodeLabels y;
  std::vector<LabelSource> source;
  /// Nodes picked by the per-segment procedure; empty for full ground truth.
  std::vector<NodeId> selected;

  /// Non-leaf cliques carrying a 0/1 label.
  std::vector<NodeId> labeled_cliques(const MergeTree& tree) const;
};

/// For each non-leaf clique, compares the adapted Rand error of keeping s_i
/// whole against splitting it into its children, counted only over voxels of
/// s_i with gt != 0. y = 1 when merging is no worse; cliques with no counted
/// voxels get y = 1.
LabelAssignment labels_from_full_gt(const MergeTree& tree, const LabelMap& sp, const LabelMap& gt);

inline constexpr double kDefaultJaccardThreshold = 0.75;

/// Labels from individually annotated segments (voxel index sets):
///  1. each node scores its best Jaccard index against all segments;
///  2. nodes scoring >= threshold are eligible;
///  3. repeatedly select the best eligible node (ties: higher id), making it,
///     its ancestors and its descendants ineligible;
///  4. cliques at selected nodes and their descendants get y = 1, cliques at
///     their ancestors y = 0; the rest stay unlabeled.
LabelAssignment labels_from_segments(const MergeTree& tree, const LabelMap& sp,
                                     std::span<const std::vector<std::size_t>> segments,
                                     double threshold = kDefaultJaccardThreshold);

/// Best Jaccard index of every node's region against the segments.
std::vector<double> eligible_scores(const MergeTree& tree, const LabelMap& sp,
                                    std::span<const std::vector<std::size_t>> segments);

/// Splits a ground-truth map into per-label voxel sets (label 0 skipped),
/// ordered by label.
std::vector<std::vector<std::size_t>> segments_from_labels(const LabelMap& gt);

}  // namespace sshmt
