#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "voxbetti/cubical.hpp"
#include "voxbetti/homology.hpp"

namespace voxbetti::detail {

using Index = FilteredCubicalComplex::Index;
inline constexpr Index kNoColumn = ~Index{0};

/// Cells of one dimension sorted by (value, index), the filtration order
/// restricted to that dimension.
std::vector<Index> sorted_cells_of_dimension(const FilteredCubicalComplex& f, int dim,
                                             const std::vector<Index>* skip_if_owned = nullptr);

struct Dim0Result {
  PersistenceDiagram diagram;
  std::vector<bool> negative_edge;  // indexed by cell index; true if the edge merged components
};

Dim0Result union_find_dim0(const FilteredCubicalComplex& f);

/// Column reduction over GF(2). One instance is shared across dimensions so
/// pivots found while reducing d_{k+1} clear the k-columns of d_k.
class BoundaryReducer {
public:
  explicit BoundaryReducer(const FilteredCubicalComplex& f);

  struct Outcome {
    PersistenceDiagram finite;         // pairs in dimension col_dim - 1
    std::vector<Index> zero_columns;   // positive col_dim cells not cleared
  };

  /// Reduces every column of dimension `col_dim` not already a pivot.
  Outcome reduce(int col_dim);

  /// Pairs of d_3 via the coboundary side: union-find over cubes plus one
  /// exterior node, joined by 2-cells taken in reverse filtration order. The
  /// merging 2-cells are exactly the pivots of d_3 and get cleared. Equivalent
  /// to reduce(3) without the fill-in that large voids cause there.
  Outcome reduce_top_dual();

  const std::vector<Index>& pivot_owners() const noexcept { return pivot_owner_; }

  bool is_pivot(Index cell) const noexcept { return pivot_owner_[cell] != kNoColumn; }
  std::size_t cleared_columns() const noexcept { return cleared_; }
  std::size_t column_additions() const noexcept { return additions_; }

private:
  bool later(Index a, Index b) const noexcept {
    const double va = values_[a], vb = values_[b];
    return va > vb || (va == vb && a > b);
  }
  void load_boundary(Index column, std::vector<Index>& out) const;
  void add_into(std::vector<Index>& working, const std::vector<Index>& other);

  const FilteredCubicalComplex& f_;
  const double* values_;
  std::vector<Index> pivot_owner_;
  std::unordered_map<Index, std::vector<Index>> reduced_;
  std::vector<Index> scratch_;
  std::vector<Index> other_;
  std::size_t cleared_ = 0;
  std::size_t additions_ = 0;
};

enum class TopPairing { CoboundaryUnionFind, BoundaryReduction };

/// compute_persistence with a choice of method for the d_3 pairs; the
/// boundary route is the slow reference used in tests.
DiagramSet compute_persistence_with(const FilteredCubicalComplex& f, TopPairing top_method);

}  // namespace voxbetti::detail
