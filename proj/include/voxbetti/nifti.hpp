#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "voxbetti/volume.hpp"

namespace voxbetti {

/// NIfTI-1 datatype codes understood by the decoder.
enum class NiftiDatatype : std::int16_t {
  UInt8 = 2,
  Int16 = 4,
  Int32 = 8,
  Float32 = 16,
  Float64 = 64,
};

inline constexpr std::size_t kNiftiHeaderSize = 348;

/// Decodes a single-frame NIfTI-1 image ("n+1" or "ni1" magic), optionally
/// gzip-wrapped. Header dim[1..3] become the volume dims and voxels are
/// reordered to row-major (dim[3] fastest). scl_slope/scl_inter are applied
/// when the slope is non-zero. Big-endian files are detected from dim[0].
Volume3D parse_nifti(std::span<const std::byte> bytes);

/// Encodes an uncompressed little-endian "n+1" file. Used for fixtures and
/// for exporting phantoms.
std::vector<std::byte> encode_nifti(const Volume3D& v, NiftiDatatype datatype);

std::vector<std::byte> gzip_compress(std::span<const std::byte> bytes);
std::vector<std::byte> gzip_decompress(std::span<const std::byte> bytes);
bool is_gzip(std::span<const std::byte> bytes) noexcept;

}  // namespace voxbetti
