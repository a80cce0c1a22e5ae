#include <algorithm>
#include <numeric>

#include "engine.hpp"

namespace voxbetti::detail {

BoundaryReducer::BoundaryReducer(const FilteredCubicalComplex& f)
    : f_(f), values_(f.values().data()), pivot_owner_(f.cell_count(), kNoColumn) {}

// Facets ordered latest-first, so the pivot is always front().
void BoundaryReducer::load_boundary(Index column, std::vector<Index>& out) const {
  out.clear();
  f_.for_each_facet(column, [&](Index facet) { out.push_back(facet); });
  std::sort(out.begin(), out.end(), [this](Index a, Index b) { return later(a, b); });
}

// working <- working + other over GF(2); both sorted latest-first.
void BoundaryReducer::add_into(std::vector<Index>& working, const std::vector<Index>& other) {
  scratch_.clear();
  auto a = working.cbegin();
  auto b = other.cbegin();
  while (a != working.cend() && b != other.cend()) {
    if (*a == *b) {
      ++a;
      ++b;
    } else if (later(*a, *b)) {
      scratch_.push_back(*a++);
    } else {
      scratch_.push_back(*b++);
    }
  }
  scratch_.insert(scratch_.end(), a, working.cend());
  scratch_.insert(scratch_.end(), b, other.end());
  working.swap(scratch_);
  ++additions_;
}

BoundaryReducer::Outcome BoundaryReducer::reduce(int col_dim) {
  Outcome outcome;
  outcome.finite.dimension = col_dim - 1;
  reduced_.clear();

  const std::size_t total_of_dim = f_.count_by_dimension()[static_cast<std::size_t>(col_dim)];
  const auto columns = sorted_cells_of_dimension(f_, col_dim, &pivot_owner_);
  cleared_ += total_of_dim - columns.size();

  std::vector<Index> working;
  working.reserve(64);
  for (const Index column : columns) {
    load_boundary(column, working);
    bool modified = false;
    while (!working.empty()) {
      const Index owner = pivot_owner_[working.front()];
      if (owner == kNoColumn) break;
      if (auto it = reduced_.find(owner); it != reduced_.end()) {
        add_into(working, it->second);
      } else {
        load_boundary(owner, other_);
        add_into(working, other_);
      }
      modified = true;
    }
    if (working.empty()) {
      outcome.zero_columns.push_back(column);
      continue;
    }
    const Index pivot = working.front();
    pivot_owner_[pivot] = column;
    if (modified) reduced_.emplace(column, working);

    const double birth = values_[pivot], death = values_[column];
    if (birth == death) {
      ++outcome.finite.zero_persistence_count;
    } else {
      outcome.finite.pairs.push_back({birth, death});
    }
  }
  return outcome;
}

BoundaryReducer::Outcome BoundaryReducer::reduce_top_dual() {
  Outcome outcome;
  outcome.finite.dimension = 2;

  const auto& n = f_.grid_dims();
  const auto& e = f_.extents();
  const std::size_t cube_count = n[0] * n[1] * n[2];
  const auto exterior = static_cast<Index>(cube_count);

  std::vector<Index> parent(cube_count + 1);
  std::iota(parent.begin(), parent.end(), Index{0});
  // Latest cube (in filtration order) of each component, by cell index;
  // kNoColumn stands for the exterior, which is later than every cube.
  std::vector<Index> latest(cube_count + 1);
  auto cube_cell = [&](Index id) {
    const Index z = id % n[2];
    const Index y = (id / n[2]) % n[1];
    const Index x = id / (n[1] * n[2]);
    return static_cast<Index>(((2 * x + 1) * e[1] + 2 * y + 1) * e[2] + 2 * z + 1);
  };
  for (Index id = 0; id < cube_count; ++id) latest[id] = cube_cell(id);
  latest[exterior] = kNoColumn;

  auto find = [&](Index x) {
    Index root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {
      const Index next = parent[x];
      parent[x] = root;
      x = next;
    }
    return root;
  };
  auto cube_id = [&](const CubicalCell& c) {
    return static_cast<Index>(((c.coords[0] / 2) * n[1] + c.coords[1] / 2) * n[2] +
                              c.coords[2] / 2);
  };
  auto later_cube = [&](Index a, Index b) {
    if (a == kNoColumn) return true;
    if (b == kNoColumn) return false;
    return later(a, b);
  };

  const auto faces = sorted_cells_of_dimension(f_, 2);
  for (auto it = faces.rbegin(); it != faces.rend(); ++it) {
    const Index face = *it;
    const CubicalCell c = f_.cell(face);
    const int axis = !(c.coords[0] & 1u) ? 0 : !(c.coords[1] & 1u) ? 1 : 2;
    const std::uint32_t coord = c.coords[axis];
    Index a = exterior, b = exterior;
    if (coord > 0) {
      CubicalCell lo = c;
      lo.coords[axis] -= 1;
      a = cube_id(lo);
    }
    if (coord + 1 < e[axis]) {
      CubicalCell hi = c;
      hi.coords[axis] += 1;
      b = cube_id(hi);
    }
    const Index ra = find(a), rb = find(b);
    if (ra == rb) continue;
    // The component whose latest cube comes earlier dies with this face.
    const bool a_survives = later_cube(latest[ra], latest[rb]);
    const Index dying_cube = a_survives ? latest[rb] : latest[ra];
    pivot_owner_[face] = dying_cube;
    const double birth = values_[face], death = values_[dying_cube];
    if (birth == death) {
      ++outcome.finite.zero_persistence_count;
    } else {
      outcome.finite.pairs.push_back({birth, death});
    }
    const Index survivor_latest = a_survives ? latest[ra] : latest[rb];
    parent[a_survives ? rb : ra] = a_survives ? ra : rb;
    latest[a_survives ? ra : rb] = survivor_latest;
  }
  return outcome;
}

}  // namespace voxbetti::detail
