#include "voxbetti/pipeline.hpp"

#include <cmath>

#include "voxbetti/error.hpp"

namespace voxbetti {

const char* model_kind_name(ModelKind kind) noexcept {
  return kind == ModelKind::Forest ? "forest" : "boosted";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "forest") return ModelKind::Forest;
  if (name == "boosted") return ModelKind::Boosted;
  throw Error(ErrorCode::Config, "model must be forest or boosted");
}

std::filesystem::path PipelineConfig::features_path() const {
  return features.empty() ? output_dir / "features.csv" : features;
}

ThresholdGrid PipelineConfig::grid() const { return ThresholdGrid::uniform(thresholds, t_lo, t_hi); }

void PipelineConfig::validate() const {
  if (thresholds < 2) throw Error(ErrorCode::Config, "threshold count must be at least 2");
  if (!(t_lo < t_hi) || !std::isfinite(t_lo) || !std::isfinite(t_hi)) {
    throw Error(ErrorCode::Config, "threshold range needs lo < hi");
  }
  if (slab == SlabMode::Explicit && slab_lo > slab_hi) {
    throw Error(ErrorCode::Config, "slab window needs lo <= hi");
  }
  if (taus.empty()) throw Error(ErrorCode::Config, "tau list is empty");
  for (double t : taus) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::Config, "tau values must be >= 0");
  }
  if (folds == 1) throw Error(ErrorCode::Config, "folds must be 0 (single split) or >= 2");
  if (!(band > 0.0 && band < 1.0)) throw Error(ErrorCode::Config, "band must lie in (0, 1)");
  if (workers < 0) throw Error(ErrorCode::Config, "workers must be >= 0");
}

// Normalization sees the whole volume so the slab inherits global intensity
// statistics; the window is cut afterwards.
Volume3D prepare_volume(Volume3D v, const PipelineConfig& config) {
  if (config.invert) v = invert(v);
  v = normalize(v);
  switch (config.slab) {
    case SlabMode::Auto: return extract_default_slab(v);
    case SlabMode::Explicit: return extract_slab(v, config.slab_lo, config.slab_hi);
    case SlabMode::Off: break;
  }
  return v;
}

BettiFeatureVector featurize_entry(const ManifestEntry& entry, const PipelineConfig& config) {
  auto features = featurize(prepare_volume(load_volume(entry), config), config.grid());
  features.label = entry.label;
  return features;
}

FeatureTable load_feature_table(const std::filesystem::path& path) {
  const auto rows = read_feature_csv(path);
  if (rows.empty()) throw Error(ErrorCode::InsufficientData, path.string() + " has no rows");
  FeatureTable table;
  table.thresholds = rows.front().thresholds();
  std::vector<double> data;
  data.reserve(rows.size() * rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].label) {
      throw Error(ErrorCode::Format, "row " + std::to_string(i + 1) + " of " + path.string() +
                                         " has no label");
    }
    table.y.push_back(static_cast<int>(*rows[i].label));
    const auto f = rows[i].as_features();
    data.insert(data.end(), f.begin(), f.end());
  }
  table.x = FeatureMatrix(rows.size(), 3 * table.thresholds, std::move(data));
  return table;
}

std::vector<FeatureSet> standard_feature_sets(std::size_t n) {
  auto block = [n](std::initializer_list<std::size_t> dims) {
    std::vector<std::size_t> cols;
    for (auto d : dims) {
      for (std::size_t i = 0; i < n; ++i) cols.push_back(d * n + i);
    }
    return cols;
  };
  return {{"B0", block({0})},
          {"B1", block({1})},
          {"B2", block({2})},
          {"B1+B2", block({1, 2})},
          {"B0+B1+B2", block({0, 1, 2})}};
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return out;
}

}  // namespace voxbetti
