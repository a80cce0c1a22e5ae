#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "voxbetti/volume.hpp"

namespace voxbetti {

/// Binary target. HGG is the positive class throughout.
enum class Label : int { LGG = 0, HGG = 1 };

std::string_view label_name(Label label) noexcept;
/// Exactly "LGG" or "HGG"; anything else is a format error.
Label parse_label(std::string_view text);

enum class FormatHint { Nifti, Raw };

struct ManifestEntry {
  std::filesystem::path path;
  Label label;
  FormatHint format;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  std::size_t count(Label label) const noexcept;
};

/// Guesses the format from the extension: .nii / .nii.gz are NIfTI, the rest raw.
FormatHint format_from_path(const std::filesystem::path& path) noexcept;

/// CSV with header `path,label`. Relative paths resolve against the
/// manifest's directory. Duplicate paths are rejected.
DatasetManifest read_manifest(const std::filesystem::path& csv_path);
void write_manifest(const std::filesystem::path& csv_path, const DatasetManifest& manifest);

/// Raw files carry their geometry in the name: `<stem>.<d0>x<d1>x<d2>.<kind>.raw`.
struct RawGeometry {
  Dims3 dims;
  ScalarKind kind;
};
std::optional<RawGeometry> raw_geometry_from_name(const std::filesystem::path& path);
std::string raw_file_name(std::string_view stem, const Dims3& dims, ScalarKind kind);

/// Loads a manifest entry. Raw entries need geometry either from the file
/// name or from `fallback`.
Volume3D load_volume(const ManifestEntry& entry,
                     const std::optional<RawGeometry>& fallback = std::nullopt);

}  // namespace voxbetti
