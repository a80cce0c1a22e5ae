#include <bit>
#include <string>

#include "voxbetti/error.hpp"
#include "voxbetti/homology.hpp"

namespace voxbetti {

namespace {

using Bits = std::vector<std::uint64_t>;

// Rank of a GF(2) matrix given as dense bit columns, by elimination on the
// highest set row of each column.
std::size_t gf2_rank(std::vector<Bits> columns, std::size_t rows) {
  if (rows == 0) return 0;
  const std::size_t words = (rows + 63) / 64;
  std::vector<std::ptrdiff_t> pivot_col(rows, -1);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    Bits& col = columns[c];
    while (true) {
      std::ptrdiff_t low = -1;
      for (std::size_t w = words; w-- > 0;) {
        if (col[w]) {
          low = static_cast<std::ptrdiff_t>(w * 64 + 63 - std::countl_zero(col[w]));
          break;
        }
      }
      if (low < 0) break;
      const std::ptrdiff_t other = pivot_col[static_cast<std::size_t>(low)];
      if (other < 0) {
        pivot_col[static_cast<std::size_t>(low)] = static_cast<std::ptrdiff_t>(c);
        ++rank;
        break;
      }
      const Bits& src = columns[static_cast<std::size_t>(other)];
      for (std::size_t w = 0; w < words; ++w) col[w] ^= src[w];
    }
  }
  return rank;
}

}  // namespace

std::array<std::size_t, 4> betti_rank_oracle_full(const FilteredCubicalComplex& f, double t) {
  if (f.cell_count() > kOracleMaxCells) {
    throw Error(ErrorCode::OracleTooLarge, std::to_string(f.cell_count()) + " cells exceeds cap of " +
                                               std::to_string(kOracleMaxCells));
  }
  // Local numbering of the sublevel cells, per dimension.
  std::array<std::vector<CubicalCell>, 4> cells;
  std::vector<std::ptrdiff_t> local(f.cell_count(), -1);
  for (FilteredCubicalComplex::Index i = 0; i < f.cell_count(); ++i) {
    if (f.value(i) > t) continue;
    const CubicalCell c = f.cell(i);
    auto& bucket = cells[static_cast<std::size_t>(c.dimension())];
    local[i] = static_cast<std::ptrdiff_t>(bucket.size());
    bucket.push_back(c);
  }

  std::array<std::size_t, 5> rank{0, 0, 0, 0, 0};  // rank[k] = rank of d_k
  for (int k = 1; k <= 3; ++k) {
    const auto& cols = cells[static_cast<std::size_t>(k)];
    const std::size_t rows = cells[static_cast<std::size_t>(k - 1)].size();
    const std::size_t words = (rows + 63) / 64;
    std::vector<Bits> matrix(cols.size(), Bits(words, 0));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      for (const CubicalCell& facet : boundary(cols[c])) {
        const auto r = local[f.index(facet)];
        if (r < 0) {
          throw Error(ErrorCode::InvalidData, "sublevel set is not closed under faces");
        }
        matrix[c][static_cast<std::size_t>(r) / 64] ^= std::uint64_t{1} << (r % 64);
      }
    }
    rank[static_cast<std::size_t>(k)] = gf2_rank(std::move(matrix), rows);
  }

  std::array<std::size_t, 4> betti{};
  for (std::size_t k = 0; k < 4; ++k) {
    betti[k] = cells[k].size() - rank[k] - rank[k + 1];
  }
  return betti;
}

std::array<std::size_t, 3> betti_rank_oracle(const FilteredCubicalComplex& f, double t) {
  const auto b = betti_rank_oracle_full(f, t);
  return {b[0], b[1], b[2]};
}

}  // namespace voxbetti
