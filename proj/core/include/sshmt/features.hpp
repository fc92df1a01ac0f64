#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "sshmt/grid.hpp"
#include "sshmt/merge_tree.hpp"

namespace sshmt {

inline constexpr std::size_t kFeatureDim = 21;

/// Per-clique features, in this order (c1 is the larger child, ties -> smaller id):
///   0      bias (1)
///   1-3    log|s_i|, log|s_c1|, log|s_c2|
///   4      |s_c2| / |s_c1|
///   5      perimeter(s_i) in faces
///   6      shared boundary length between c1 and c2 in faces
///   7      shared length / min(perimeter(c1), perimeter(c2))
///   8-10   bounding-box extent per axis / max extent (z is 1 for 2D data)
///   11-14  confidence mean, std, min, max over the shared boundary
///   15-16  confidence mean over the interiors of c1 and c2
///   17     |feature 15 - feature 16|
///   18-19  confidence mean and std over s_i
///   20     raw-image mean over the shared boundary, 0 without a raw image
/// Boundary statistics are taken over both endpoint voxels of every crossing
/// face; perimeters count faces to other regions (the image border is not
/// boundary). Interiors are voxels with no face neighbor outside the region,
/// falling back to the whole region when that set is empty.
using FeatureVector = std::array<double, kFeatureDim>;

namespace feature {
inline constexpr std::size_t kBias = 0;
inline constexpr std::size_t kLogSize = 1;
inline constexpr std::size_t kSizeRatio = 4;
inline constexpr std::size_t kPerimeter = 5;
inline constexpr std::size_t kSharedLength = 6;
inline constexpr std::size_t kSharedFraction = 7;
inline constexpr std::size_t kExtent = 8;
inline constexpr std::size_t kBoundaryMean = 11;
inline constexpr std::size_t kInteriorMean = 15;
inline constexpr std::size_t kInteriorDiff = 17;
inline constexpr std::size_t kRegionMean = 18;
inline constexpr std::size_t kRawBoundaryMean = 20;
}  // namespace feature

/// Precomputes per-node aggregates once per image so that every clique's
/// features are O(1) to read. Does not keep references to its inputs.
class FeatureExtractor {
 public:
  FeatureExtractor(const MergeTree& tree, const LabelMap& sp, const GridImage& conf,
                   const GridImage* raw = nullptr);
  FeatureExtractor(const FeatureExtractor&);
  FeatureExtractor(FeatureExtractor&&) noexcept;
  FeatureExtractor& operator=(const FeatureExtractor&);
  FeatureExtractor& operator=(FeatureExtractor&&) noexcept;
  ~FeatureExtractor();

  /// Throws LeafClique for leaf nodes.
  FeatureVector extract(NodeId clique) const;
  /// Rows in the order of tree.internal_nodes().
  std::vector<FeatureVector> extract_all() const;

 private:
  struct NodeStats;
  std::vector<std::array<NodeId, 2>> children_;
  bool is_2d_;
  bool has_raw_;
  std::vector<NodeStats> stats_;
};

FeatureVector extract_features(const MergeTree& tree, NodeId clique, const LabelMap& sp,
                               const GridImage& conf, const GridImage* raw = nullptr);

/// Per-component affine normalization fitted on training rows. The bias
/// component is exempt; components with spread below kMinStd are centered but
/// not scaled (their stored std is 1).
class Standardizer {
 public:
  static constexpr double kMinStd = 1e-12;

  Standardizer();
  Standardizer(std::vector<double> means, std::vector<double> stds);

  static Standardizer fit(std::span<const FeatureVector> rows);

  FeatureVector apply(const FeatureVector& x) const;
  FeatureVector invert(const FeatureVector& z) const;

  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& stds() const noexcept { return stds_; }

 private:
  std::vector<double> means_;
  std::vector<double> stds_;
};

}  // namespace sshmt
