#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace voxbetti {

using Dims3 = std::array<std::size_t, 3>;

enum class ScalarKind { UInt8, Int16, Int32, Float32, Float64 };

std::size_t scalar_width(ScalarKind kind) noexcept;
const char* scalar_name(ScalarKind kind) noexcept;
ScalarKind parse_scalar_kind(std::string_view name);

/// Dense 3D grid of intensities, row-major: index (i, j, k) lives at
/// (i * d1 + j) * d2 + k. Immutable once constructed.
class Volume3D {
public:
  Volume3D() = default;

  /// Throws ErrorCode::Shape when data.size() != d0*d1*d2 or any dim is zero,
  /// and ErrorCode::InvalidData on NaN/Inf. A negative slice_axis selects the
  /// default axis (see default_slice_axis).
  Volume3D(Dims3 dims, std::vector<double> data, int slice_axis = -1);

  const Dims3& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<const double> data() const noexcept { return data_; }
  int slice_axis() const noexcept { return slice_axis_; }

  double at(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }

  Volume3D with_slice_axis(int axis) const;

private:
  Dims3 dims_{0, 0, 0};
  std::vector<double> data_;
  int slice_axis_ = 0;
};

/// The axis whose length differs from the other two; axis 0 when all three
/// agree or all differ.
int default_slice_axis(const Dims3& dims) noexcept;

/// Headerless little-endian samples in row-major order.
Volume3D parse_raw(std::span<const std::byte> bytes, Dims3 dims, ScalarKind kind);
std::vector<std::byte> serialize_raw(const Volume3D& v, ScalarKind kind);

/// Affine map onto [0, 255] using the global min and max. Constant volumes
/// map to all zeros.
Volume3D normalize(const Volume3D& v);

/// Mirror intensities (x -> -x); sublevel persistence of the result is the
/// superlevel persistence of the input.
Volume3D invert(const Volume3D& v);

/// Slices lo..hi inclusive along the volume's slice axis.
Volume3D extract_slab(const Volume3D& v, std::size_t lo, std::size_t hi);

inline constexpr std::size_t kDefaultSlabLo = 30;
inline constexpr std::size_t kDefaultSlabHi = 90;

/// Applies the default 30..90 window when the slice axis is long enough and
/// returns the volume unchanged otherwise.
Volume3D extract_default_slab(const Volume3D& v);

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes);

}  // namespace voxbetti
