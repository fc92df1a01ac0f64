#pragma once

#include "sshmt/grid.hpp"

namespace sshmt {

/// Priority-flood watershed without watershed lines, face connectivity.
///
/// Basins are seeded at regional minima, where a minimum is a face-connected
/// plateau of equal value with no strictly lower neighbor. Minima are numbered
/// 1..K in scan order of their first voxel. Flooding pops voxels in ascending
/// confidence with FIFO order among equal values; a voxel takes the label of
/// the basin that first reaches it. Every voxel ends up labeled.
LabelMap watershed(const GridImage& conf);

}  // namespace sshmt
