#include "voxbetti/cubical.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>

#include "voxbetti/error.hpp"

namespace voxbetti {

namespace {

Dims3 extents_of(const Dims3& n) { return {2 * n[0] + 1, 2 * n[1] + 1, 2 * n[2] + 1}; }

// Expands one axis of a (outer, n, inner) array to (outer, 2n+1, inner):
// odd positions copy the voxel, even positions take the min of the two
// voxels they separate (or the single one at the border).
std::vector<double> expand_axis(const std::vector<double>& in, std::size_t outer, std::size_t n,
                                std::size_t inner) {
  const std::size_t e = 2 * n + 1;
  std::vector<double> out(outer * e * inner);
  const auto rows = static_cast<std::ptrdiff_t>(outer * e);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const std::size_t o = static_cast<std::size_t>(r) / e;
    const std::size_t c = static_cast<std::size_t>(r) % e;
    double* dst = out.data() + static_cast<std::size_t>(r) * inner;
    const double* base = in.data() + o * n * inner;
    if (c & 1) {
      const double* src = base + (c / 2) * inner;
      std::copy(src, src + inner, dst);
    } else if (c == 0) {
      std::copy(base, base + inner, dst);
    } else if (c == 2 * n) {
      const double* src = base + (n - 1) * inner;
      std::copy(src, src + inner, dst);
    } else {
      const double* a = base + (c / 2 - 1) * inner;
      const double* b = base + (c / 2) * inner;
      for (std::size_t i = 0; i < inner; ++i) dst[i] = std::min(a[i], b[i]);
    }
  }
  return out;
}

void check_size(const Dims3& n) {
  const std::size_t total = FilteredCubicalComplex::expected_cell_count(n);
  if (total >= std::numeric_limits<FilteredCubicalComplex::Index>::max()) {
    throw Error(ErrorCode::Shape, "cubical complex exceeds 2^32 cells");
  }
}

}  // namespace

std::vector<CubicalCell> boundary(const CubicalCell& c) {
  std::vector<CubicalCell> facets;
  facets.reserve(2 * static_cast<std::size_t>(c.dimension()));
  for (int axis = 0; axis < 3; ++axis) {
    if (c.coords[axis] & 1u) {
      CubicalCell lo = c, hi = c;
      lo.coords[axis] -= 1;
      hi.coords[axis] += 1;
      facets.push_back(lo);
      facets.push_back(hi);
    }
  }
  return facets;
}

FilteredCubicalComplex::FilteredCubicalComplex(Dims3 grid_dims, std::vector<double> values)
    : grid_dims_(grid_dims), extents_(extents_of(grid_dims)), values_(std::move(values)) {
  if (values_.size() != expected_cell_count(grid_dims_)) {
    throw Error(ErrorCode::Shape, "cell value array does not match the grid census");
  }
  strides_ = {static_cast<Index>(extents_[1] * extents_[2]), static_cast<Index>(extents_[2]), 1};
}

std::size_t FilteredCubicalComplex::expected_cell_count(const Dims3& n) noexcept {
  const Dims3 e = extents_of(n);
  return e[0] * e[1] * e[2];
}

std::array<std::size_t, 4> FilteredCubicalComplex::count_by_dimension() const noexcept {
  std::array<std::size_t, 4> counts{0, 0, 0, 0};
  // Each axis contributes either an interval (n choices) or a vertex (n+1).
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::size_t product = 1;
    int dim = 0;
    for (int axis = 0; axis < 3; ++axis) {
      if (mask & (1u << axis)) {
        product *= grid_dims_[axis];
        ++dim;
      } else {
        product *= grid_dims_[axis] + 1;
      }
    }
    counts[dim] += product;
  }
  return counts;
}

FilteredCubicalComplex build_filtration(const Volume3D& v) {
  const Dims3& n = v.dims();
  check_size(n);
  std::vector<double> stage(v.data().begin(), v.data().end());
  stage = expand_axis(stage, n[0] * n[1], n[2], 1);
  stage = expand_axis(stage, n[0], n[1], 2 * n[2] + 1);
  stage = expand_axis(stage, 1, n[0], (2 * n[1] + 1) * (2 * n[2] + 1));
  return FilteredCubicalComplex(n, std::move(stage));
}

FilteredCubicalComplex build_filtration_serial(const Volume3D& v) {
  const Dims3& n = v.dims();
  check_size(n);
  const Dims3 e = extents_of(n);
  std::vector<double> values(e[0] * e[1] * e[2]);
  // Voxel range along one axis whose cubes contain doubled coordinate c.
  auto incident = [](std::size_t c, std::size_t len) -> std::pair<std::size_t, std::size_t> {
    if (c & 1) return {c / 2, c / 2};
    const std::size_t lo = c == 0 ? 0 : c / 2 - 1;
    const std::size_t hi = c / 2 == len ? len - 1 : c / 2;
    return {lo, hi};
  };
  std::size_t idx = 0;
  for (std::size_t x = 0; x < e[0]; ++x) {
    const auto [i0, i1] = incident(x, n[0]);
    for (std::size_t y = 0; y < e[1]; ++y) {
      const auto [j0, j1] = incident(y, n[1]);
      for (std::size_t z = 0; z < e[2]; ++z) {
        const auto [k0, k1] = incident(z, n[2]);
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = i0; i <= i1; ++i)
          for (std::size_t j = j0; j <= j1; ++j)
            for (std::size_t k = k0; k <= k1; ++k) m = std::min(m, v.at(i, j, k));
        values[idx++] = m;
      }
    }
  }
  return FilteredCubicalComplex(n, std::move(values));
}

std::vector<FilteredCubicalComplex::Index> cells_in_filtration_order(
    const FilteredCubicalComplex& f) {
  using Index = FilteredCubicalComplex::Index;
  std::vector<Index> order(f.cell_count());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double va = f.value(a), vb = f.value(b);
    if (va != vb) return va < vb;
    const int da = f.dimension(a), db = f.dimension(b);
    if (da != db) return da < db;
    return a < b;
  });
  return order;
}

void write_cells_csv(std::ostream& out, const FilteredCubicalComplex& f) {
  out << "x,y,z,dim,value\n";
  for (FilteredCubicalComplex::Index i = 0; i < f.cell_count(); ++i) {
    const CubicalCell c = f.cell(i);
    out << c.coords[0] << ',' << c.coords[1] << ',' << c.coords[2] << ',' << c.dimension() << ','
        << f.value(i) << '\n';
  }
}

}  // namespace voxbetti
