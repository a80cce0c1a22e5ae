#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "voxbetti/volume.hpp"

namespace voxbetti {

/// A cell of the cubical grid in doubled coordinates: even coordinates are
/// vertex positions, odd ones are unit intervals. Voxel (i, j, k) is the
/// 3-cube at (2i+1, 2j+1, 2k+1).
struct CubicalCell {
  std::array<std::uint32_t, 3> coords{0, 0, 0};

  int dimension() const noexcept {
    return static_cast<int>((coords[0] & 1u) + (coords[1] & 1u) + (coords[2] & 1u));
  }
  friend bool operator==(const CubicalCell&, const CubicalCell&) = default;
  friend auto operator<=>(const CubicalCell&, const CubicalCell&) = default;
};

/// Facets of a cell: every odd coordinate replaced by each of its two even
/// neighbours. 2 * dimension cells; empty for a vertex.
std::vector<CubicalCell> boundary(const CubicalCell& c);

/// Sublevel filtration of a volume in the T-construction. Every cell of the
/// (2n0+1) x (2n1+1) x (2n2+1) doubled grid carries the minimum intensity of
/// the voxels (3-cubes) containing it, so {value <= t} is a closed subcomplex.
class FilteredCubicalComplex {
public:
  using Index = std::uint32_t;

  FilteredCubicalComplex(Dims3 grid_dims, std::vector<double> values);

  const Dims3& grid_dims() const noexcept { return grid_dims_; }
  const Dims3& extents() const noexcept { return extents_; }
  std::size_t cell_count() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  double value(Index idx) const noexcept { return values_[idx]; }
  double value(const CubicalCell& c) const noexcept { return values_[index(c)]; }

  Index index(const CubicalCell& c) const noexcept {
    return static_cast<Index>((c.coords[0] * extents_[1] + c.coords[1]) * extents_[2] +
                              c.coords[2]);
  }
  CubicalCell cell(Index idx) const noexcept {
    const auto e12 = static_cast<Index>(extents_[1] * extents_[2]);
    const auto e2 = static_cast<Index>(extents_[2]);
    return {{idx / e12, (idx % e12) / e2, idx % e2}};
  }
  int dimension(Index idx) const noexcept { return cell(idx).dimension(); }
  bool contains(const CubicalCell& c) const noexcept {
    return c.coords[0] < extents_[0] && c.coords[1] < extents_[1] && c.coords[2] < extents_[2];
  }

  /// Linear-index offset of a unit step along each axis.
  const std::array<Index, 3>& strides() const noexcept { return strides_; }

  /// Calls fn(facet_index) for each facet of `idx`.
  template <typename Fn>
  void for_each_facet(Index idx, Fn&& fn) const {
    const CubicalCell c = cell(idx);
    for (int axis = 0; axis < 3; ++axis) {
      if (c.coords[axis] & 1u) {
        fn(idx - strides_[axis]);
        fn(idx + strides_[axis]);
      }
    }
  }

  /// Cells per dimension from the product formula: a d-cell chooses d of the
  /// three axes to be intervals (n of them) and the rest vertices (n+1).
  std::array<std::size_t, 4> count_by_dimension() const noexcept;

  /// Total cells predicted by the census, (2n0+1)(2n1+1)(2n2+1).
  static std::size_t expected_cell_count(const Dims3& grid_dims) noexcept;

private:
  Dims3 grid_dims_;
  Dims3 extents_;
  std::array<Index, 3> strides_;
  std::vector<double> values_;
};

/// Parallel construction: three separable min-expansion passes, one per axis.
FilteredCubicalComplex build_filtration(const Volume3D& v);

/// Reference construction: for every cell, the minimum over its incident
/// voxels enumerated directly. Kept for testing and benchmarking.
FilteredCubicalComplex build_filtration_serial(const Volume3D& v);

/// All cell indices sorted by (value, dimension, lexicographic coordinates).
std::vector<FilteredCubicalComplex::Index> cells_in_filtration_order(
    const FilteredCubicalComplex& f);

/// Debug dump: `x,y,z,dim,value` per cell.
void write_cells_csv(std::ostream& out, const FilteredCubicalComplex& f);

}  // namespace voxbetti
