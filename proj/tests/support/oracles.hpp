#pragma once

// Independent reference implementations used by the unit and acceptance
// suites. Nothing here calls into the code paths it is used to check.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "voxbetti/homology.hpp"
#include "voxbetti/volume.hpp"

namespace oracle {

using voxbetti::Dims3;
using voxbetti::Volume3D;

/// Value of every doubled-grid cell, (2n+1)^3 layout, by testing each voxel
/// for containment of the cell: min over voxels whose closed cube holds it.
std::vector<double> brute_force_cell_values(const Volume3D& v);

/// #pairs with birth <= t < death at each threshold, by direct enumeration.
std::vector<std::uint32_t> interval_count(const voxbetti::PersistenceDiagram& d,
                                          std::span<const double> thresholds);

/// Bottleneck distance between two diagrams of finite points and the same
/// number of essential classes (their births are matched in sorted order).
/// Returns +inf when the essential counts differ.
double bottleneck(const voxbetti::PersistenceDiagram& a, const voxbetti::PersistenceDiagram& b);

/// AUC by enumerating every (positive, negative) pair; ties count one half.
double auc_by_pairs(std::span<const int> y, std::span<const double> scores);

/// One of the 48 axis-aligned symmetries of the cube: output axis a reads
/// input axis perm[a], mirrored when flip[a] is set.
struct Symmetry {
  std::array<int, 3> perm;
  std::array<bool, 3> flip;
};
std::vector<Symmetry> all_symmetries();
Volume3D apply(const Symmetry& s, const Volume3D& v);
/// Maps a doubled-grid coordinate of the input complex to the output complex.
std::array<std::uint32_t, 3> apply_to_cell(const Symmetry& s, const Dims3& input_dims,
                                           const std::array<std::uint32_t, 3>& c);

/// Hand-assembled NIfTI-1 images, header fields written at their fixed byte
/// offsets. `file_order` is the voxel payload exactly as stored (dim[1]
/// fastest).
struct NiftiFixture {
  Dims3 dims{1, 1, 1};
  std::int16_t datatype = 16;  // float32
  std::int16_t bitpix = 32;
  float scl_slope = 0.0f;
  float scl_inter = 0.0f;
  const char* magic = "n+1";
  bool big_endian = false;
  std::vector<double> file_order;
};
std::vector<std::byte> build_nifti(const NiftiFixture& fx);
/// gzip member produced by the system's zlib through the gzip header bits.
std::vector<std::byte> gzip(std::span<const std::byte> bytes);

/// Value of voxel (i, j, k) in a file-order payload.
inline double file_voxel(const NiftiFixture& fx, std::size_t i, std::size_t j, std::size_t k) {
  return fx.file_order[i + fx.dims[0] * (j + fx.dims[1] * k)];
}

/// Unique scratch directory under the system temp path, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

}  // namespace oracle
