#include <algorithm>
#include <numeric>

#include "engine.hpp"

namespace voxbetti::detail {

namespace {

class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }

  Index find(Index x) noexcept {
    Index root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const Index next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  /// Links two roots by rank and returns the new root.
  Index link(Index a, Index b) noexcept {
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return a;
  }

private:
  std::vector<Index> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace

std::vector<Index> sorted_cells_of_dimension(const FilteredCubicalComplex& f, int dim,
                                             const std::vector<Index>* skip_if_owned) {
  struct Keyed {
    double value;
    Index index;
  };
  std::vector<Keyed> keyed;
  const auto& e = f.extents();
  const auto values = f.values();
  Index idx = 0;
  for (std::size_t x = 0; x < e[0]; ++x) {
    for (std::size_t y = 0; y < e[1]; ++y) {
      const int partial = static_cast<int>((x & 1) + (y & 1));
      for (std::size_t z = 0; z < e[2]; ++z, ++idx) {
        if (partial + static_cast<int>(z & 1) != dim) continue;
        if (skip_if_owned && (*skip_if_owned)[idx] != kNoColumn) continue;
        keyed.push_back({values[idx], idx});
      }
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return a.value < b.value || (a.value == b.value && a.index < b.index);
  });
  std::vector<Index> out(keyed.size());
  for (std::size_t i = 0; i < keyed.size(); ++i) out[i] = keyed[i].index;
  return out;
}

Dim0Result union_find_dim0(const FilteredCubicalComplex& f) {
  const auto& e = f.extents();
  const auto& n = f.grid_dims();
  const Dims3 vdims{n[0] + 1, n[1] + 1, n[2] + 1};
  const auto values = f.values();

  // Compact vertex numbering; vertex cells sit at all-even doubled coordinates.
  auto vertex_id = [&](Index cell_idx) {
    const CubicalCell c = f.cell(cell_idx);
    return static_cast<Index>(((c.coords[0] / 2) * vdims[1] + c.coords[1] / 2) * vdims[2] +
                              c.coords[2] / 2);
  };
  auto vertex_cell = [&](Index vid) {
    const Index z = vid % vdims[2];
    const Index y = (vid / vdims[2]) % vdims[1];
    const Index x = vid / (vdims[1] * vdims[2]);
    return static_cast<Index>(((2 * x) * e[1] + 2 * y) * e[2] + 2 * z);
  };

  const std::size_t vertex_count = vdims[0] * vdims[1] * vdims[2];
  DisjointSets sets(vertex_count);
  // Birth vertex (as a cell index) of the component rooted at each root.
  std::vector<Index> birth_cell(vertex_count);
  for (Index v = 0; v < vertex_count; ++v) birth_cell[v] = vertex_cell(v);

  auto elder = [&](Index a, Index b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  };

  Dim0Result result;
  result.diagram.dimension = 0;
  result.negative_edge.assign(f.cell_count(), false);

  const auto edges = sorted_cells_of_dimension(f, 1);
  const auto& strides = f.strides();
  for (const Index edge : edges) {
    const CubicalCell c = f.cell(edge);
    const int axis = (c.coords[0] & 1u) ? 0 : (c.coords[1] & 1u) ? 1 : 2;
    const Index ra = sets.find(vertex_id(edge - strides[axis]));
    const Index rb = sets.find(vertex_id(edge + strides[axis]));
    if (ra == rb) continue;
    result.negative_edge[edge] = true;
    const Index ba = birth_cell[ra], bb = birth_cell[rb];
    const Index survivor = elder(ba, bb) ? ba : bb;
    const Index victim = survivor == ba ? bb : ba;
    const double birth = values[victim], death = values[edge];
    if (birth == death) {
      ++result.diagram.zero_persistence_count;
    } else {
      result.diagram.pairs.push_back({birth, death});
    }
    birth_cell[sets.link(ra, rb)] = survivor;
  }

  for (Index v = 0; v < vertex_count; ++v) {
    if (sets.find(v) == v) result.diagram.pairs.push_back({values[birth_cell[v]], kInfinity});
  }
  return result;
}

}  // namespace voxbetti::detail
