#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "sshmt/grid.hpp"

namespace sshmt {

// GRD1 container:
//   bytes 0-3   magic "GRD1"
//   bytes 4-15  nx, ny, nz as little-endian u32
//   byte  16    dtype code
//   bytes 17+   payload, x fastest, little-endian
enum class Dtype : std::uint8_t { U8 = 0, U16 = 1, U32 = 2, F32 = 3 };

inline constexpr std::size_t kGridHeaderSize = 17;

using AnyGrid = std::variant<Grid<std::uint8_t>, Grid<std::uint16_t>, Grid<std::uint32_t>, Grid<float>>;

Dtype dtype_of(const AnyGrid& g) noexcept;
std::size_t dtype_size(Dtype t) noexcept;

std::vector<std::byte> encode_grid(const AnyGrid& grid);
AnyGrid decode_grid(std::span<const std::byte> bytes);

AnyGrid load_grid(const std::filesystem::path& path);
void save_grid(const AnyGrid& grid, const std::filesystem::path& path);

/// Loads any dtype and converts values to float.
GridImage load_image(const std::filesystem::path& path);
/// Loads an integer dtype as a label map; f32 files are rejected.
LabelMap load_labels(const std::filesystem::path& path);

}  // namespace sshmt
