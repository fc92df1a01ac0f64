#include "sshmt/grid_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace sshmt {

std::string to_string(const Dims& d) {
  return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz);
}

namespace {

constexpr char kMagic[4] = {'G', 'R', 'D', '1'};

template <class T>
struct DtypeOf;
template <>
struct DtypeOf<std::uint8_t> { static constexpr Dtype value = Dtype::U8; };
template <>
struct DtypeOf<std::uint16_t> { static constexpr Dtype value = Dtype::U16; };
template <>
struct DtypeOf<std::uint32_t> { static constexpr Dtype value = Dtype::U32; };
template <>
struct DtypeOf<float> { static constexpr Dtype value = Dtype::F32; };

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::byte>((v >> (8 * k)) & 0xFFu));
}

std::uint32_t get_u32(std::span<const std::byte> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= std::to_integer<std::uint32_t>(in[at + k]) << (8 * k);
  return v;
}

template <class T>
void put_payload(std::vector<std::byte>& out, const Grid<T>& g) {
  for (T value : g) {
    std::uint32_t bits = 0;
    if constexpr (std::is_same_v<T, float>) {
      bits = std::bit_cast<std::uint32_t>(value);
    } else {
      bits = value;
    }
    for (std::size_t k = 0; k < sizeof(T); ++k) {
      out.push_back(static_cast<std::byte>((bits >> (8 * k)) & 0xFFu));
    }
  }
}

template <class T>
Grid<T> get_payload(std::span<const std::byte> payload, const Dims& dims) {
  std::vector<T> values(dims.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint32_t bits = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) {
      bits |= std::to_integer<std::uint32_t>(payload[i * sizeof(T) + k]) << (8 * k);
    }
    if constexpr (std::is_same_v<T, float>) {
      values[i] = std::bit_cast<float>(bits);
    } else {
      values[i] = static_cast<T>(bits);
    }
  }
  return Grid<T>(dims, std::move(values));
}

}  // namespace

Dtype dtype_of(const AnyGrid& g) noexcept {
  return std::visit([](const auto& grid) { return DtypeOf<typename std::decay_t<decltype(grid)>::value_type>::value; }, g);
}

std::size_t dtype_size(Dtype t) noexcept {
  switch (t) {
    case Dtype::U8: return 1;
    case Dtype::U16: return 2;
    case Dtype::U32: return 4;
    case Dtype::F32: return 4;
  }
  return 0;
}

std::vector<std::byte> encode_grid(const AnyGrid& grid) {
  std::vector<std::byte> out;
  std::visit(
      [&](const auto& g) {
        using T = typename std::decay_t<decltype(g)>::value_type;
        out.reserve(kGridHeaderSize + g.size() * sizeof(T));
        for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
        put_u32(out, g.dims().nx);
        put_u32(out, g.dims().ny);
        put_u32(out, g.dims().nz);
        out.push_back(static_cast<std::byte>(DtypeOf<T>::value));
        put_payload(out, g);
      },
      grid);
  return out;
}

AnyGrid decode_grid(std::span<const std::byte> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(Errc::BadMagic, "missing GRD1 magic");
  }
  if (bytes.size() < kGridHeaderSize) {
    throw Error(Errc::DimsMismatch, "truncated GRD1 header");
  }
  const Dims dims{get_u32(bytes, 4), get_u32(bytes, 8), get_u32(bytes, 12)};
  const auto code = std::to_integer<std::uint8_t>(bytes[16]);
  if (code > static_cast<std::uint8_t>(Dtype::F32)) {
    throw Error(Errc::UnknownDtype, "dtype code " + std::to_string(code));
  }
  const auto dtype = static_cast<Dtype>(code);
  const auto payload = bytes.subspan(kGridHeaderSize);
  if (payload.size() != dims.size() * dtype_size(dtype)) {
    throw Error(Errc::DimsMismatch, "payload of " + std::to_string(payload.size()) +
                                        " bytes does not match " + to_string(dims));
  }
  switch (dtype) {
    case Dtype::U8: return get_payload<std::uint8_t>(payload, dims);
    case Dtype::U16: return get_payload<std::uint16_t>(payload, dims);
    case Dtype::U32: return get_payload<std::uint32_t>(payload, dims);
    case Dtype::F32: return get_payload<float>(payload, dims);
  }
  throw Error(Errc::UnknownDtype, "unreachable");
}

AnyGrid load_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_grid(std::as_bytes(std::span(raw)));
}

void save_grid(const AnyGrid& grid, const std::filesystem::path& path) {
  const auto bytes = encode_grid(grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

GridImage load_image(const std::filesystem::path& path) {
  return std::visit(
      [](auto&& g) -> GridImage {
        using T = typename std::decay_t<decltype(g)>::value_type;
        if constexpr (std::is_same_v<T, float>) {
          return std::move(g);
        } else {
          std::vector<float> values(g.begin(), g.end());
          return GridImage(g.dims(), std::move(values));
        }
      },
      load_grid(path));
}

LabelMap load_labels(const std::filesystem::path& path) {
  return std::visit(
      [&](auto&& g) -> LabelMap {
        using T = typename std::decay_t<decltype(g)>::value_type;
        if constexpr (std::is_same_v<T, float>) {
          throw Error(Errc::UnknownDtype, path.string() + " holds f32 values, expected labels");
        } else if constexpr (std::is_same_v<T, std::uint32_t>) {
          return std::move(g);
        } else {
          std::vector<std::uint32_t> values(g.begin(), g.end());
          return LabelMap(g.dims(), std::move(values));
        }
      },
      load_grid(path));
}

}  // namespace sshmt
