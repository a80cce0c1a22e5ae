#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "voxbetti/manifest.hpp"
#include "voxbetti/random.hpp"
#include "voxbetti/volume.hpp"

namespace voxbetti {

/// blob: smooth dark blob whose sublevel sets are nested balls (LGG stand-in).
/// shell: dark spherical shell, one cavity. ring: dark torus, one loop.
/// two-class-mix: alternating blob and structured blob (HGG stand-in: bright
/// inclusions, a dark ring and sometimes a bright torus on the same field).
enum class PhantomKind { Blob, Shell, Ring, TwoClassMix };

std::string_view phantom_kind_name(PhantomKind kind) noexcept;
PhantomKind parse_phantom_kind(std::string_view name);

struct PhantomOptions {
  Dims3 dims{32, 32, 32};
  double noise = 2.0;  // Gaussian sigma, in intensity units of [0, 255]
};

/// Intensities are integers in [0, 255] so they survive uint8 storage.
Volume3D smooth_blob(const PhantomOptions& opt, Rng& rng);
Volume3D structured_blob(const PhantomOptions& opt, Rng& rng);
Volume3D dark_shell(const PhantomOptions& opt, Rng& rng);
Volume3D dark_ring(const PhantomOptions& opt, Rng& rng);

struct LabelledVolume {
  Volume3D volume;
  Label label;
};

/// `count` phantoms, each from its own seed drawn off `seed`. two-class-mix
/// alternates LGG (blob) and HGG (structured); the single kinds are labelled
/// LGG for blob and HGG otherwise.
std::vector<LabelledVolume> generate_phantoms(PhantomKind kind, std::size_t count,
                                              std::uint64_t seed, const PhantomOptions& opt = {});

/// Writes uint8 raw files `phantom_NNN.<d0>x<d1>x<d2>.uint8.raw` and
/// manifest.csv under out_dir; returns the manifest.
DatasetManifest write_phantoms(const std::filesystem::path& out_dir,
                               std::span<const LabelledVolume> phantoms);

/// Integer intensities drawn uniformly from [0, levels).
Volume3D random_integer_volume(const Dims3& dims, Rng& rng, int levels = 256);

}  // namespace voxbetti
