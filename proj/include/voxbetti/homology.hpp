#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

#include "voxbetti/cubical.hpp"

namespace voxbetti {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A homology class born at `birth` and dying at `death` (filtration values).
/// Essential classes have death = +inf.
struct PersistencePair {
  double birth = 0.0;
  double death = kInfinity;

  bool essential() const noexcept { return death == kInfinity; }
  double persistence() const noexcept { return death - birth; }
  bool alive_at(double t) const noexcept { return birth <= t && t < death; }

  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
  friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

/// PD_k. Pairs with birth == death are not stored; their number is kept in
/// `zero_persistence_count` so the Euler audit can account for every cell.
struct PersistenceDiagram {
  int dimension = 0;
  std::vector<PersistencePair> pairs;
  std::size_t zero_persistence_count = 0;

  /// Number of classes alive at t under the half-open rule birth <= t < death.
  std::size_t betti_at(double t) const noexcept;
  std::size_t essential_count() const noexcept;
  /// Sorts pairs into a canonical order so diagrams compare as multisets.
  void canonicalize();
};

/// Diagrams for dimensions 0..3. Dimension 3 is computed for auditing only and
/// is empty for every volume (a box has no 3-cycles).
struct DiagramSet {
  std::array<PersistenceDiagram, 4> dims;

  const PersistenceDiagram& operator[](int k) const { return dims.at(static_cast<std::size_t>(k)); }
  PersistenceDiagram& operator[](int k) { return dims.at(static_cast<std::size_t>(k)); }
  std::array<std::size_t, 4> betti_at(double t) const noexcept;
};

/// PD_0 by union-find over vertices and edges in filtration order. Merging
/// two components kills the younger one (elder rule); ties go to the smaller
/// vertex coordinate.
PersistenceDiagram persistence_dim0(const FilteredCubicalComplex& f);

/// PD_k for k in {1, 2}. PD_2 pairs come from d_3 reduced on the coboundary
/// side (union-find over cubes plus an exterior node); PD_1 from GF(2) column
/// reduction of d_2 with the d_3 pivots cleared.
PersistenceDiagram persistence_reduction(const FilteredCubicalComplex& f, int k);

/// Full pipeline: union-find for PD_0, the d_3 pairs, then reduction of d_2
/// with clearing. PD_3 is always empty on a box.
DiagramSet compute_persistence(const FilteredCubicalComplex& f);

/// Largest complex the dense oracle accepts.
inline constexpr std::size_t kOracleMaxCells = 10000;

/// Betti numbers of the sublevel complex {value <= t} by dense GF(2) Gaussian
/// elimination: beta_k = dim ker d_k - rank d_{k+1}. Independent of the
/// reduction engine. Throws ErrorCode::OracleTooLarge above kOracleMaxCells.
std::array<std::size_t, 3> betti_rank_oracle(const FilteredCubicalComplex& f, double t);

/// As above, including beta_3.
std::array<std::size_t, 4> betti_rank_oracle_full(const FilteredCubicalComplex& f, double t);

/// chi(t) = sum_k (-1)^k #{k-cells with value <= t}.
long long euler_characteristic(const FilteredCubicalComplex& f, double t);

/// CSV `dim,birth,death` for dimensions 0..2, death written as "inf" for
/// essential classes.
void write_diagram_csv(std::ostream& out, const DiagramSet& diagrams);

}  // namespace voxbetti
