#include "voxbetti/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "voxbetti/error.hpp"

namespace voxbetti {

std::string_view phantom_kind_name(PhantomKind kind) noexcept {
  switch (kind) {
    case PhantomKind::Blob: return "blob";
    case PhantomKind::Shell: return "shell";
    case PhantomKind::Ring: return "ring";
    case PhantomKind::TwoClassMix: return "two-class-mix";
  }
  return "?";
}

PhantomKind parse_phantom_kind(std::string_view name) {
  for (auto k : {PhantomKind::Blob, PhantomKind::Shell, PhantomKind::Ring, PhantomKind::TwoClassMix}) {
    if (name == phantom_kind_name(k)) return k;
  }
  throw Error(ErrorCode::Config, "phantom kind must be blob, shell, ring or two-class-mix");
}

namespace {

using Vec3 = std::array<double, 3>;

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform_unit(rng); }

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// Distance from p to the circle of radius R around `axis` through c.
double torus_distance(const Vec3& p, const Vec3& c, int axis, double major) {
  const int u = (axis + 1) % 3, v = (axis + 2) % 3;
  const double du = p[u] - c[u], dv = p[v] - c[v], dw = p[axis] - c[axis];
  const double radial = std::sqrt(du * du + dv * dv) - major;
  return std::sqrt(radial * radial + dw * dw);
}

// Samples an intensity function on the grid, adds noise, rounds and clamps.
template <typename Fn>
Volume3D sample(const PhantomOptions& opt, Rng& rng, Fn&& intensity) {
  const auto& d = opt.dims;
  if (d[0] == 0 || d[1] == 0 || d[2] == 0) throw Error(ErrorCode::Config, "phantom dims must be positive");
  std::normal_distribution<double> noise(0.0, opt.noise > 0.0 ? opt.noise : 1.0);
  std::vector<double> data(d[0] * d[1] * d[2]);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < d[0]; ++i) {
    for (std::size_t j = 0; j < d[1]; ++j) {
      for (std::size_t k = 0; k < d[2]; ++k, ++idx) {
        double value = intensity(Vec3{double(i), double(j), double(k)});
        if (opt.noise > 0.0) value += noise(rng);
        data[idx] = std::clamp(std::round(value), 0.0, 255.0);
      }
    }
  }
  return Volume3D(d, std::move(data));
}

struct Field {
  Vec3 center;
  Vec3 stretch;
  double rmax;
  double min_half;

  // Dark at the center, rising linearly to the corners with no plateau.
  double operator()(const Vec3& p) const {
    Vec3 q;
    for (int a = 0; a < 3; ++a) q[a] = (p[a] - center[a]) / stretch[a];
    return 30.0 + 190.0 * std::min(1.0, norm(q) / rmax);
  }
};

Field random_field(const Dims3& d, Rng& rng) {
  Field f;
  for (int a = 0; a < 3; ++a) {
    const double mid = (static_cast<double>(d[a]) - 1.0) / 2.0;
    f.center[a] = mid + uniform(rng, -1.5, 1.5) * static_cast<double>(d[a]) / 32.0;
    f.stretch[a] = uniform(rng, 0.85, 1.15);
  }
  f.rmax = 0.0;
  for (int corner = 0; corner < 8; ++corner) {
    Vec3 q;
    for (int a = 0; a < 3; ++a) {
      const double edge = (corner >> a) & 1 ? static_cast<double>(d[a]) - 1.0 : 0.0;
      q[a] = (edge - f.center[a]) / f.stretch[a];
    }
    f.rmax = std::max(f.rmax, norm(q));
  }
  f.min_half = static_cast<double>(std::min({d[0], d[1], d[2]})) / 2.0;
  return f;
}

}  // namespace

Volume3D smooth_blob(const PhantomOptions& opt, Rng& rng) {
  const Field field = random_field(opt.dims, rng);
  return sample(opt, rng, field);
}

Volume3D structured_blob(const PhantomOptions& opt, Rng& rng) {
  const Field field = random_field(opt.dims, rng);
  const double a = 0.62 * field.min_half;  // feature scale
  const Vec3 c = field.center;

  // Layout by distance from the center keeps the features disjoint:
  // dark ring near 0.35a, bright spots near 0.62a, bright torus near 0.95a.
  const int ring_axis = static_cast<int>(uniform_below(rng, 3));
  const double ring_major = 0.35 * a + 0.5;

  struct Spot {
    Vec3 at;
    double radius;
  };
  std::vector<Spot> spots(1 + uniform_below(rng, 3));
  for (auto& s : spots) {
    const double theta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double z = uniform(rng, -1.0, 1.0);
    const double rho = std::sqrt(1.0 - z * z);
    const Vec3 dir{rho * std::cos(theta), rho * std::sin(theta), z};
    const double dist = 0.62 * a + 0.5;
    for (int k = 0; k < 3; ++k) s.at[k] = c[k] + dist * dir[k];
    s.radius = uniform(rng, 1.2, 1.6);
  }

  const bool bright_torus = uniform_below(rng, 2) == 1;
  const int torus_axis = static_cast<int>(uniform_below(rng, 3));
  const double torus_major = 0.95 * a + 0.5;

  return sample(opt, rng, [&](const Vec3& p) {
    if (torus_distance(p, c, ring_axis, ring_major) <= 1.0) return 5.0;
    for (const auto& s : spots) {
      const Vec3 d{p[0] - s.at[0], p[1] - s.at[1], p[2] - s.at[2]};
      if (norm(d) <= s.radius) return 240.0;
    }
    if (bright_torus && torus_distance(p, c, torus_axis, torus_major) <= 1.1) return 235.0;
    return field(p);
  });
}

Volume3D dark_shell(const PhantomOptions& opt, Rng& rng) {
  const Field field = random_field(opt.dims, rng);
  const double radius = 0.6 * field.min_half;
  return sample(opt, rng, [&](const Vec3& p) {
    const Vec3 d{p[0] - field.center[0], p[1] - field.center[1], p[2] - field.center[2]};
    return std::abs(norm(d) - radius) <= 0.9 ? 20.0 : 200.0;
  });
}

Volume3D dark_ring(const PhantomOptions& opt, Rng& rng) {
  const Field field = random_field(opt.dims, rng);
  const int axis = static_cast<int>(uniform_below(rng, 3));
  const double major = 0.6 * field.min_half;
  return sample(opt, rng, [&](const Vec3& p) {
    return torus_distance(p, field.center, axis, major) <= 1.2 ? 20.0 : 200.0;
  });
}

std::vector<LabelledVolume> generate_phantoms(PhantomKind kind, std::size_t count,
                                              std::uint64_t seed, const PhantomOptions& opt) {
  Rng master(seed);
  std::vector<LabelledVolume> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(master());
    switch (kind) {
      case PhantomKind::Blob: out.push_back({smooth_blob(opt, rng), Label::LGG}); break;
      case PhantomKind::Shell: out.push_back({dark_shell(opt, rng), Label::HGG}); break;
      case PhantomKind::Ring: out.push_back({dark_ring(opt, rng), Label::HGG}); break;
      case PhantomKind::TwoClassMix:
        if (i % 2 == 0) {
          out.push_back({smooth_blob(opt, rng), Label::LGG});
        } else {
          out.push_back({structured_blob(opt, rng), Label::HGG});
        }
        break;
    }
  }
  return out;
}

DatasetManifest write_phantoms(const std::filesystem::path& out_dir,
                               std::span<const LabelledVolume> phantoms) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir.string() + ": " + ec.message());
  const std::size_t width = std::max<std::size_t>(3, std::to_string(phantoms.size()).size());
  DatasetManifest manifest;
  for (std::size_t i = 0; i < phantoms.size(); ++i) {
    std::string stem = std::to_string(i);
    stem.insert(0, width - stem.size(), '0');
    const auto& v = phantoms[i].volume;
    const auto path = out_dir / raw_file_name("phantom_" + stem, v.dims(), ScalarKind::UInt8);
    write_file_bytes(path, serialize_raw(v, ScalarKind::UInt8));
    manifest.entries.push_back({path, phantoms[i].label, FormatHint::Raw});
  }
  write_manifest(out_dir / "manifest.csv", manifest);
  return manifest;
}

Volume3D random_integer_volume(const Dims3& dims, Rng& rng, int levels) {
  if (levels < 1) throw Error(ErrorCode::Config, "levels must be positive");
  std::vector<double> data(dims[0] * dims[1] * dims[2]);
  for (auto& x : data) x = static_cast<double>(uniform_below(rng, static_cast<std::uint64_t>(levels)));
  return Volume3D(dims, std::move(data));
}

}  // namespace voxbetti
