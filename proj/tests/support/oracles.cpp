#include "oracles.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <unistd.h>

namespace oracle {

std::vector<double> brute_force_cell_values(const Volume3D& v) {
  const auto& n = v.dims();
  const std::array<std::size_t, 3> e{2 * n[0] + 1, 2 * n[1] + 1, 2 * n[2] + 1};
  std::vector<double> out(e[0] * e[1] * e[2], std::numeric_limits<double>::infinity());
  std::size_t idx = 0;
  for (std::size_t x = 0; x < e[0]; ++x) {
    for (std::size_t y = 0; y < e[1]; ++y) {
      for (std::size_t z = 0; z < e[2]; ++z, ++idx) {
        // Voxel (i, j, k) spans doubled coordinates [2i, 2i+2] on each axis.
        for (std::size_t i = 0; i < n[0]; ++i) {
          if (x < 2 * i || x > 2 * i + 2) continue;
          for (std::size_t j = 0; j < n[1]; ++j) {
            if (y < 2 * j || y > 2 * j + 2) continue;
            for (std::size_t k = 0; k < n[2]; ++k) {
              if (z < 2 * k || z > 2 * k + 2) continue;
              out[idx] = std::min(out[idx], v.at(i, j, k));
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<std::uint32_t> interval_count(const voxbetti::PersistenceDiagram& d,
                                          std::span<const double> thresholds) {
  std::vector<std::uint32_t> out;
  for (double t : thresholds) {
    std::uint32_t c = 0;
    for (const auto& p : d.pairs) c += (p.birth <= t && t < p.death) ? 1u : 0u;
    out.push_back(c);
  }
  return out;
}

namespace {

// Kuhn's augmenting paths on a dense bipartite graph.
bool perfect_matching(const std::vector<std::vector<char>>& adj) {
  const std::size_t n = adj.size();
  std::vector<int> match(n, -1);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<char> seen(n, 0);
    std::function<bool(std::size_t)> augment = [&](std::size_t a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (!adj[a][b] || seen[b]) continue;
        seen[b] = 1;
        if (match[b] < 0 || augment(static_cast<std::size_t>(match[b]))) {
          match[b] = static_cast<int>(a);
          return true;
        }
      }
      return false;
    };
    if (!augment(u)) return false;
  }
  return true;
}

}  // namespace

double bottleneck(const voxbetti::PersistenceDiagram& a, const voxbetti::PersistenceDiagram& b) {
  std::vector<double> ea, eb;
  std::vector<voxbetti::PersistencePair> fa, fb;
  for (const auto& p : a.pairs) (p.essential() ? ea.push_back(p.birth) : fa.push_back(p));
  for (const auto& p : b.pairs) (p.essential() ? eb.push_back(p.birth) : fb.push_back(p));
  if (ea.size() != eb.size()) return std::numeric_limits<double>::infinity();
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  double essential = 0.0;
  for (std::size_t i = 0; i < ea.size(); ++i) essential = std::max(essential, std::abs(ea[i] - eb[i]));

  // Left: points of a, then diagonal slots for b. Right: points of b, then
  // diagonal slots for a.
  const std::size_t n = fa.size(), m = fb.size(), size = n + m;
  std::vector<std::vector<double>> cost(size, std::vector<double>(size, 0.0));
  constexpr double kForbidden = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      if (i < n && j < m) {
        cost[i][j] = std::max(std::abs(fa[i].birth - fb[j].birth), std::abs(fa[i].death - fb[j].death));
      } else if (i < n) {
        cost[i][j] = j - m == i ? (fa[i].death - fa[i].birth) / 2.0 : kForbidden;
      } else if (j < m) {
        cost[i][j] = i - n == j ? (fb[j].death - fb[j].birth) / 2.0 : kForbidden;
      }
    }
  }
  std::vector<double> candidates{0.0};
  for (const auto& row : cost) {
    for (double c : row) {
      if (std::isfinite(c)) candidates.push_back(c);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    std::vector<std::vector<char>> adj(size, std::vector<char>(size, 0));
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) adj[i][j] = cost[i][j] <= candidates[mid];
    }
    if (perfect_matching(adj)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return std::max(essential, size == 0 ? 0.0 : candidates[lo]);
}

double auc_by_pairs(std::span<const int> y, std::span<const double> scores) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0) continue;
      ++pairs;
      wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
    }
  }
  return wins / static_cast<double>(pairs);
}

std::vector<Symmetry> all_symmetries() {
  std::vector<Symmetry> out;
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (int mask = 0; mask < 8; ++mask) {
      out.push_back({perm, {(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0}});
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Volume3D apply(const Symmetry& s, const Volume3D& v) {
  const auto& in = v.dims();
  const Dims3 out{in[static_cast<std::size_t>(s.perm[0])], in[static_cast<std::size_t>(s.perm[1])],
                  in[static_cast<std::size_t>(s.perm[2])]};
  std::vector<double> data(v.size());
  std::size_t idx = 0;
  for (std::size_t a = 0; a < out[0]; ++a) {
    for (std::size_t b = 0; b < out[1]; ++b) {
      for (std::size_t c = 0; c < out[2]; ++c, ++idx) {
        const std::array<std::size_t, 3> o{a, b, c};
        std::array<std::size_t, 3> src{};
        for (std::size_t ax = 0; ax < 3; ++ax) {
          src[static_cast<std::size_t>(s.perm[ax])] = s.flip[ax] ? out[ax] - 1 - o[ax] : o[ax];
        }
        data[idx] = v.at(src[0], src[1], src[2]);
      }
    }
  }
  return Volume3D(out, std::move(data));
}

std::array<std::uint32_t, 3> apply_to_cell(const Symmetry& s, const Dims3& input_dims,
                                           const std::array<std::uint32_t, 3>& c) {
  std::array<std::uint32_t, 3> o{};
  for (std::size_t ax = 0; ax < 3; ++ax) {
    const auto src = static_cast<std::size_t>(s.perm[ax]);
    const auto top = static_cast<std::uint32_t>(2 * input_dims[src]);
    o[ax] = s.flip[ax] ? top - c[src] : c[src];
  }
  return o;
}

namespace {

class HeaderWriter {
public:
  HeaderWriter(std::vector<std::byte>& buf, bool big_endian) : buf_(buf), big_(big_endian) {}

  template <typename T>
  void put(std::size_t offset, T value) {
    std::array<std::byte, sizeof(T)> raw{};
    std::memcpy(raw.data(), &value, sizeof(T));
    if (big_) std::reverse(raw.begin(), raw.end());
    if (buf_.size() < offset + sizeof(T)) buf_.resize(offset + sizeof(T));
    std::copy(raw.begin(), raw.end(), buf_.begin() + static_cast<std::ptrdiff_t>(offset));
  }

private:
  std::vector<std::byte>& buf_;
  bool big_;
};

}  // namespace

std::vector<std::byte> build_nifti(const NiftiFixture& fx) {
  std::vector<std::byte> buf(352, std::byte{0});
  HeaderWriter w(buf, fx.big_endian);
  w.put<std::int32_t>(0, 348);
  w.put<std::int16_t>(40, 3);
  for (std::size_t a = 0; a < 3; ++a) w.put<std::int16_t>(42 + 2 * a, static_cast<std::int16_t>(fx.dims[a]));
  for (std::size_t a = 3; a < 7; ++a) w.put<std::int16_t>(42 + 2 * a, 1);
  w.put<std::int16_t>(70, fx.datatype);
  w.put<std::int16_t>(72, fx.bitpix);
  for (std::size_t a = 0; a < 4; ++a) w.put<float>(76 + 4 * a, 1.0f);
  w.put<float>(108, 352.0f);
  w.put<float>(112, fx.scl_slope);
  w.put<float>(116, fx.scl_inter);
  std::memcpy(buf.data() + 344, fx.magic, std::strlen(fx.magic));

  std::size_t offset = 352;
  for (double value : fx.file_order) {
    switch (fx.datatype) {
      case 2: w.put<std::uint8_t>(offset, static_cast<std::uint8_t>(value)); offset += 1; break;
      case 4: w.put<std::int16_t>(offset, static_cast<std::int16_t>(value)); offset += 2; break;
      case 8: w.put<std::int32_t>(offset, static_cast<std::int32_t>(value)); offset += 4; break;
      case 16: w.put<float>(offset, static_cast<float>(value)); offset += 4; break;
      case 64: w.put<double>(offset, value); offset += 8; break;
      default: w.put<std::int16_t>(offset, static_cast<std::int16_t>(value)); offset += 2; break;
    }
  }
  return buf;
}

std::vector<std::byte> gzip(std::span<const std::byte> bytes) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw std::runtime_error("deflateInit2");
  }
  std::vector<std::byte> out(deflateBound(&zs, static_cast<uLong>(bytes.size())) + 32);
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<std::byte*>(bytes.data()));
  zs.avail_in = static_cast<uInt>(bytes.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw std::runtime_error("deflate");
  out.resize(zs.total_out);
  return out;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  path_ = (base / ("voxbetti_" + tag + "_" + std::to_string(::getpid()) + "_" +
                   std::to_string(counter++)))
              .string();
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace oracle
