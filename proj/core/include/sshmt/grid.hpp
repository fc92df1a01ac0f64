#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sshmt/error.hpp"

namespace sshmt {

/// Grid extents. 2D data uses nz == 1.
struct Dims {
  std::uint32_t nx = 1;
  std::uint32_t ny = 1;
  std::uint32_t nz = 1;

  std::size_t size() const noexcept {
    return std::size_t{nx} * std::size_t{ny} * std::size_t{nz};
  }
  bool is_2d() const noexcept { return nz == 1; }

  friend bool operator==(const Dims&, const Dims&) = default;
};

std::string to_string(const Dims& d);

/// Dense scalar grid, x fastest, then y, then z.
template <class T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  explicit Grid(Dims dims, T fill = T{}) : dims_(dims), values_(dims.size(), fill) {}
  Grid(Dims dims, std::vector<T> values) : dims_(dims), values_(std::move(values)) {
    if (values_.size() != dims_.size()) {
      throw Error(Errc::DimsMismatch, "grid of " + to_string(dims_) + " needs " +
                                          std::to_string(dims_.size()) + " values, got " +
                                          std::to_string(values_.size()));
    }
  }

  const Dims& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::size_t index(std::uint32_t x, std::uint32_t y, std::uint32_t z = 0) const noexcept {
    return (std::size_t{z} * dims_.ny + y) * dims_.nx + x;
  }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }
  T& at(std::uint32_t x, std::uint32_t y, std::uint32_t z = 0) { return values_[index(x, y, z)]; }
  const T& at(std::uint32_t x, std::uint32_t y, std::uint32_t z = 0) const {
    return values_[index(x, y, z)];
  }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Dims dims_{0, 0, 0};
  std::vector<T> values_;
};

/// Membrane confidence map (values in [0,1]) or any other scalar image.
using GridImage = Grid<float>;
/// Integer region labels. 0 means "ignore" in ground truth.
using LabelMap = Grid<std::uint32_t>;

struct Coord {
  std::uint32_t x, y, z;
};

inline Coord coord_of(const Dims& d, std::size_t i) noexcept {
  const auto x = static_cast<std::uint32_t>(i % d.nx);
  const auto rest = i / d.nx;
  return {x, static_cast<std::uint32_t>(rest % d.ny), static_cast<std::uint32_t>(rest / d.ny)};
}

/// Calls fn(neighbor_index) for every face neighbor of voxel i (4 in 2D, 6 in 3D).
template <class Fn>
void for_each_face_neighbor(const Dims& d, std::size_t i, Fn&& fn) {
  const Coord c = coord_of(d, i);
  const std::size_t sx = 1, sy = d.nx, sz = std::size_t{d.nx} * d.ny;
  if (c.x > 0) fn(i - sx);
  if (c.x + 1 < d.nx) fn(i + sx);
  if (c.y > 0) fn(i - sy);
  if (c.y + 1 < d.ny) fn(i + sy);
  if (c.z > 0) fn(i - sz);
  if (c.z + 1 < d.nz) fn(i + sz);
}

/// Calls fn(a, b) once per unordered face-adjacent voxel pair, with a < b.
template <class Fn>
void for_each_face_pair(const Dims& d, Fn&& fn) {
  const std::size_t sy = d.nx, sz = std::size_t{d.nx} * d.ny;
  std::size_t i = 0;
  for (std::uint32_t z = 0; z < d.nz; ++z) {
    for (std::uint32_t y = 0; y < d.ny; ++y) {
      for (std::uint32_t x = 0; x < d.nx; ++x, ++i) {
        if (x + 1 < d.nx) fn(i, i + 1);
        if (y + 1 < d.ny) fn(i, i + sy);
        if (z + 1 < d.nz) fn(i, i + sz);
      }
    }
  }
}

template <class A, class B>
void require_same_dims(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (a.dims() != b.dims()) {
    throw Error(Errc::DimsMismatch, std::string(what) + ": " + to_string(a.dims()) + " vs " +
                                        to_string(b.dims()));
  }
}

}  // namespace sshmt
