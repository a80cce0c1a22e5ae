#include "voxbetti/manifest.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "voxbetti/error.hpp"
#include "voxbetti/nifti.hpp"

namespace voxbetti {

std::string_view label_name(Label label) noexcept {
  return label == Label::HGG ? "HGG" : "LGG";
}

Label parse_label(std::string_view text) {
  if (text == "HGG") return Label::HGG;
  if (text == "LGG") return Label::LGG;
  throw Error(ErrorCode::Format, "label must be exactly LGG or HGG, got '" + std::string(text) + "'");
}

std::size_t DatasetManifest::count(Label label) const noexcept {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.label == label;
  return n;
}

FormatHint format_from_path(const std::filesystem::path& path) noexcept {
  const std::string name = path.filename().string();
  auto ends_with = [&](std::string_view suffix) {
    return name.size() >= suffix.size() &&
           name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return ends_with(".nii") || ends_with(".nii.gz") ? FormatHint::Nifti : FormatHint::Raw;
}

DatasetManifest read_manifest(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest " + csv_path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Format, "manifest is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "path,label") {
    throw Error(ErrorCode::Format, "manifest header must be 'path,label'");
  }
  DatasetManifest manifest;
  std::set<std::filesystem::path> seen;
  const auto base = csv_path.parent_path();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::Format, "manifest line " + std::to_string(line_no) + " has no label");
    }
    std::filesystem::path path = line.substr(0, comma);
    if (path.is_relative()) path = base / path;
    path = path.lexically_normal();
    if (!seen.insert(path).second) {
      throw Error(ErrorCode::Format, "duplicate manifest path " + path.string());
    }
    manifest.entries.push_back({path, parse_label(line.substr(comma + 1)), format_from_path(path)});
  }
  return manifest;
}

void write_manifest(const std::filesystem::path& csv_path, const DatasetManifest& manifest) {
  std::ofstream out(csv_path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest " + csv_path.string());
  out << "path,label\n";
  const auto base = csv_path.parent_path();
  for (const auto& e : manifest.entries) {
    auto rel = e.path.lexically_relative(base);
    out << (rel.empty() ? e.path : rel).generic_string() << ',' << label_name(e.label) << '\n';
  }
}

std::optional<RawGeometry> raw_geometry_from_name(const std::filesystem::path& path) {
  static const std::regex pattern(R"(\.(\d+)x(\d+)x(\d+)\.(uint8|int16|int32|float32|float64)\.raw$)");
  const std::string name = path.filename().string();
  std::smatch m;
  if (!std::regex_search(name, m, pattern)) return std::nullopt;
  return RawGeometry{{std::stoul(m[1]), std::stoul(m[2]), std::stoul(m[3])},
                     parse_scalar_kind(m[4].str())};
}

std::string raw_file_name(std::string_view stem, const Dims3& dims, ScalarKind kind) {
  std::ostringstream os;
  os << stem << '.' << dims[0] << 'x' << dims[1] << 'x' << dims[2] << '.' << scalar_name(kind)
     << ".raw";
  return os.str();
}

Volume3D load_volume(const ManifestEntry& entry, const std::optional<RawGeometry>& fallback) {
  const auto bytes = read_file_bytes(entry.path);
  if (entry.format == FormatHint::Nifti) return parse_nifti(bytes);
  auto geometry = raw_geometry_from_name(entry.path);
  if (!geometry) geometry = fallback;
  if (!geometry) {
    throw Error(ErrorCode::Config, "raw file " + entry.path.string() +
                                       " has no geometry in its name and none was given");
  }
  return parse_raw(bytes, geometry->dims, geometry->kind);
}

}  // namespace voxbetti
