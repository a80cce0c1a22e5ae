#include <algorithm>
#include <charconv>
#include <ostream>

#include "engine.hpp"
#include "voxbetti/error.hpp"

namespace voxbetti {

std::size_t PersistenceDiagram::betti_at(double t) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [t](const auto& p) { return p.alive_at(t); }));
}

std::size_t PersistenceDiagram::essential_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const auto& p) { return p.essential(); }));
}

void PersistenceDiagram::canonicalize() { std::sort(pairs.begin(), pairs.end()); }

std::array<std::size_t, 4> DiagramSet::betti_at(double t) const noexcept {
  return {dims[0].betti_at(t), dims[1].betti_at(t), dims[2].betti_at(t), dims[3].betti_at(t)};
}

PersistenceDiagram persistence_dim0(const FilteredCubicalComplex& f) {
  auto result = detail::union_find_dim0(f);
  result.diagram.canonicalize();
  return std::move(result.diagram);
}

namespace detail {

DiagramSet compute_persistence_with(const FilteredCubicalComplex& f, TopPairing top_method) {
  DiagramSet out;
  for (int k = 0; k < 4; ++k) out[k].dimension = k;

  auto dim0 = detail::union_find_dim0(f);
  out[0] = std::move(dim0.diagram);

  detail::BoundaryReducer reducer(f);
  const auto values = f.values();

  // d_3: cubes against 2-cells. On the coboundary side no cube is left
  // unpaired (the exterior node absorbs the last component), so PD_3 is empty.
  auto top = top_method == TopPairing::CoboundaryUnionFind ? reducer.reduce_top_dual()
                                                           : reducer.reduce(3);
  out[2] = std::move(top.finite);
  for (const Index c : top.zero_columns) out[3].pairs.push_back({values[c], kInfinity});

  // d_2: 2-cells against edges. Columns that became pivots above are cleared.
  auto mid = reducer.reduce(2);
  out[1] = std::move(mid.finite);
  for (const Index c : mid.zero_columns) out[2].pairs.push_back({values[c], kInfinity});

  // Positive edges (cycles closing in the union-find) that never die are
  // essential 1-classes.
  const auto& e = f.extents();
  Index idx = 0;
  for (std::size_t x = 0; x < e[0]; ++x) {
    for (std::size_t y = 0; y < e[1]; ++y) {
      for (std::size_t z = 0; z < e[2]; ++z, ++idx) {
        if ((x & 1) + (y & 1) + (z & 1) != 1) continue;
        if (!dim0.negative_edge[idx] && !reducer.is_pivot(idx)) {
          out[1].pairs.push_back({values[idx], kInfinity});
        }
      }
    }
  }

  for (auto& d : out.dims) d.canonicalize();
  return out;
}

}  // namespace detail

DiagramSet compute_persistence(const FilteredCubicalComplex& f) {
  return detail::compute_persistence_with(f, detail::TopPairing::CoboundaryUnionFind);
}

PersistenceDiagram persistence_reduction(const FilteredCubicalComplex& f, int k) {
  if (k != 1 && k != 2) {
    throw Error(ErrorCode::OutOfRange, "persistence_reduction handles dimensions 1 and 2");
  }
  return std::move(compute_persistence(f)[k]);
}

long long euler_characteristic(const FilteredCubicalComplex& f, double t) {
  long long chi = 0;
  const auto& e = f.extents();
  const auto values = f.values();
  std::size_t idx = 0;
  for (std::size_t x = 0; x < e[0]; ++x) {
    for (std::size_t y = 0; y < e[1]; ++y) {
      for (std::size_t z = 0; z < e[2]; ++z, ++idx) {
        if (values[idx] > t) continue;
        chi += ((x & 1) + (y & 1) + (z & 1)) % 2 == 0 ? 1 : -1;
      }
    }
  }
  return chi;
}

void write_diagram_csv(std::ostream& out, const DiagramSet& diagrams) {
  out << "dim,birth,death\n";
  char buf[64];
  auto put = [&](double x) {
    if (x == kInfinity) {
      out << "inf";
      return;
    }
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    out.write(buf, res.ptr - buf);
  };
  for (int k = 0; k < 3; ++k) {
    for (const auto& p : diagrams[k].pairs) {
      out << k << ',';
      put(p.birth);
      out << ',';
      put(p.death);
      out << '\n';
    }
  }
}

}  // namespace voxbetti
