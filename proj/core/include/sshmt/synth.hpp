#pragma once

#include <cstdint>

#include "sshmt/grid.hpp"

namespace sshmt {

/// Parameters of the Voronoi cell generator.
struct SynthParams {
  Dims dims{64, 64, 1};
  std::uint32_t n_cells = 12;
  /// Membrane half-thickness: voxels within this Chebyshev distance (minus one)
  /// of a boundary-touching voxel are membrane. 1 keeps only the two voxels
  /// that straddle each boundary face.
  std::uint32_t membrane_width = 1;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

struct SynthVolume {
  GridImage conf;  ///< membrane confidence in [0,1]
  LabelMap gt;     ///< Voronoi cells labeled 1..n_cells
};

/// Voronoi partition around n_cells random seeds, a membrane indicator along
/// cell boundaries, box smoothing and clamped Gaussian noise. Deterministic
/// per seed.
SynthVolume synth_volume(const SynthParams& p);

}  // namespace sshmt
