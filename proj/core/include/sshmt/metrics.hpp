#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>

#include "sshmt/grid.hpp"

namespace sshmt {

struct RandScores {
  double error = 0.0;
  double precision = 1.0;
  double recall = 1.0;
};

/// Joint voxel counts of a segmentation S (rows) against ground truth T (columns).
class ContingencyTable {
 public:
  void add(std::uint32_t s, std::uint32_t t, std::uint64_t count = 1);

  std::uint64_t total() const noexcept { return total_; }

  /// Pairwise co-clustering precision Σp²/Σs², recall Σp²/Σt² and
  /// error 1 - F-score. With no counted voxels the error is 0.
  RandScores scores() const;

 private:
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> joint_;
  std::map<std::uint32_t, std::uint64_t> rows_;
  std::map<std::uint32_t, std::uint64_t> cols_;
  std::uint64_t total_ = 0;
};

/// Adapted Rand error of `seg` against `gt`. With ignore_zero_gt, voxels where
/// gt == 0 are not counted.
RandScores adapted_rand(const LabelMap& seg, const LabelMap& gt, bool ignore_zero_gt = true);

inline double adapted_rand_error(const LabelMap& seg, const LabelMap& gt, bool ignore_zero_gt = true) {
  return adapted_rand(seg, gt, ignore_zero_gt).error;
}

/// |A ∩ B| / |A ∪ B| over voxel index sets; 1 when both are empty.
double jaccard(std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace sshmt
