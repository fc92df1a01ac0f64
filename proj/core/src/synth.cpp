#include "sshmt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

namespace sshmt {

namespace {

// Separable box filter of the given radius; in 2D the z axis is left alone.
std::vector<double> box_smooth(const Dims& d, std::vector<double> v, int radius) {
  const std::array<std::size_t, 3> extent{d.nx, d.ny, d.nz};
  const std::array<std::size_t, 3> stride{1, d.nx, std::size_t{d.nx} * d.ny};
  std::vector<double> tmp(v.size());
  for (int axis = 0; axis < 3; ++axis) {
    if (extent[axis] == 1) continue;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Coord c = coord_of(d, i);
      const std::array<std::uint32_t, 3> pos{c.x, c.y, c.z};
      const auto p = static_cast<long>(pos[axis]);
      const long lo = std::max(0L, p - radius);
      const long hi = std::min(static_cast<long>(extent[axis]) - 1, p + radius);
      double acc = 0.0;
      for (long q = lo; q <= hi; ++q) acc += v[i + (q - p) * static_cast<long>(stride[axis])];
      tmp[i] = acc / static_cast<double>(hi - lo + 1);
    }
    v.swap(tmp);
  }
  return v;
}

}  // namespace

SynthVolume synth_volume(const SynthParams& p) {
  const Dims& d = p.dims;
  const std::size_t n = d.size();
  if (n == 0) throw Error(Errc::InvalidArgument, "empty synthetic volume");
  if (p.n_cells == 0 || p.n_cells > n) {
    throw Error(Errc::InvalidArgument, "n_cells must be in [1, voxel count]");
  }
  if (!std::isfinite(p.noise_std) || p.noise_std < 0.0) {
    throw Error(Errc::InvalidArgument, "noise_std must be finite and non-negative");
  }

  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> seeds;
  std::unordered_set<std::size_t> taken;
  while (seeds.size() < p.n_cells) {
    const std::size_t s = pick(rng);
    if (taken.insert(s).second) seeds.push_back(s);
  }

  std::vector<std::uint32_t> gt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Coord c = coord_of(d, i);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const Coord s = coord_of(d, seeds[k]);
      const double dx = double(c.x) - s.x, dy = double(c.y) - s.y, dz = double(c.z) - s.z;
      const double dist = dx * dx + dy * dy + dz * dz;
      if (dist < best) {
        best = dist;
        gt[i] = static_cast<std::uint32_t>(k + 1);
      }
    }
  }

  std::vector<double> membrane(n, 0.0);
  for_each_face_pair(d, [&](std::size_t a, std::size_t b) {
    if (gt[a] != gt[b]) membrane[a] = membrane[b] = 1.0;
  });
  if (p.membrane_width > 1) {
    const long r = static_cast<long>(p.membrane_width) - 1;
    std::vector<double> dilated(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (membrane[i] == 0.0) continue;
      const Coord c = coord_of(d, i);
      const long z0 = d.is_2d() ? 0 : std::max(0L, long(c.z) - r);
      const long z1 = d.is_2d() ? 0 : std::min(long(d.nz) - 1, long(c.z) + r);
      for (long z = z0; z <= z1; ++z)
        for (long y = std::max(0L, long(c.y) - r); y <= std::min(long(d.ny) - 1, long(c.y) + r); ++y)
          for (long x = std::max(0L, long(c.x) - r); x <= std::min(long(d.nx) - 1, long(c.x) + r); ++x)
            dilated[(std::size_t(z) * d.ny + std::size_t(y)) * d.nx + std::size_t(x)] = 1.0;
    }
    membrane.swap(dilated);
  }
  membrane = box_smooth(d, std::move(membrane), 1);

  std::vector<float> conf(n);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double v = membrane[i];
    if (p.noise_std > 0.0) v += p.noise_std * noise(rng);
    conf[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return {GridImage(d, std::move(conf)), LabelMap(d, std::move(gt))};
}

}  // namespace sshmt
