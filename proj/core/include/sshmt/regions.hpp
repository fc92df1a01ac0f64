#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "sshmt/grid.hpp"

namespace sshmt {

/// Accumulates mean/std/min/max over a multiset of values.
struct RunningStats {
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double min = 0.0;
  double max = 0.0;

  void add(double v) noexcept;
  void merge(const RunningStats& other) noexcept;

  double mean() const noexcept { return count ? sum / static_cast<double>(count) : 0.0; }
  /// Population standard deviation.
  double stddev() const noexcept;
};

/// Relabels every maximal face-connected set of equal nonzero labels to 1..K in
/// scan order of its first voxel. Zero voxels stay zero.
LabelMap connected_components(const LabelMap& map);

/// Face pairs crossing the boundary between two regions.
struct RegionBoundary {
  /// (voxel in the lower label, voxel in the higher label)
  std::vector<std::pair<std::size_t, std::size_t>> faces;
  /// Stats over the confidence values at both endpoints of every face.
  RunningStats stats;
};

class RegionAdjacency {
 public:
  using Key = std::pair<std::uint32_t, std::uint32_t>;

  /// Symmetric lookup; nullptr when a and b do not touch.
  const RegionBoundary* find(std::uint32_t a, std::uint32_t b) const;
  const std::map<Key, RegionBoundary>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  RegionBoundary& at_or_insert(std::uint32_t a, std::uint32_t b);

 private:
  std::map<Key, RegionBoundary> pairs_;
};

/// Collects every face pair whose endpoints carry different labels.
/// The map must not contain label 0.
RegionAdjacency region_adjacency(const LabelMap& map, const GridImage& conf);

/// Sorted distinct labels present in the map (0 included when present).
std::vector<std::uint32_t> distinct_labels(const LabelMap& map);

}  // namespace sshmt
