#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "voxbetti/betti.hpp"
#include "voxbetti/eval.hpp"
#include "voxbetti/manifest.hpp"
#include "voxbetti/model_io.hpp"
#include "voxbetti/phantom.hpp"

namespace voxbetti {

enum class ModelKind { Forest, Boosted };
const char* model_kind_name(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view name);

/// auto: the default 30..90 window when the slice axis is long enough;
/// explicit: slab_lo..slab_hi, failing on short volumes; off: whole volume.
enum class SlabMode { Auto, Explicit, Off };

struct PipelineConfig {
  std::filesystem::path manifest;
  std::filesystem::path features;  // empty: <output_dir>/features.csv
  std::filesystem::path output_dir = ".";

  SlabMode slab = SlabMode::Auto;
  std::size_t slab_lo = kDefaultSlabLo;
  std::size_t slab_hi = kDefaultSlabHi;
  bool invert = false;  // superlevel filtration via x -> -x before normalizing

  std::size_t thresholds = kDefaultThresholds;
  double t_lo = 0.0;
  double t_hi = 255.0;

  ModelKind model = ModelKind::Forest;
  LearnConfig learn;
  std::vector<double> taus = default_tau_grid();
  std::uint64_t seed = 0;
  std::size_t folds = 0;  // 0: single 80:20 split; k >= 2: stratified k-fold
  double band = 0.4;
  int workers = 0;

  std::filesystem::path features_path() const;
  ThresholdGrid grid() const;
  /// Throws ErrorCode::Config for N < 2, lo > hi, empty tau list and the like.
  void validate() const;
};

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitPartial = 2, kExitInvariant = 3 };

/// Load, optional inversion, normalization to [0, 255] over the whole volume,
/// slab window, featurize.
BettiFeatureVector featurize_entry(const ManifestEntry& entry, const PipelineConfig& config);
Volume3D prepare_volume(Volume3D v, const PipelineConfig& config);

struct ExtractResult {
  std::size_t written = 0;
  std::size_t reused = 0;  // rows taken from the cache
  std::vector<std::pair<std::filesystem::path, std::string>> failures;
};

/// Feature CSV in manifest order. Rows are cached in <features>.cache keyed
/// by a hash of the volume bytes, label and extraction settings, so a rerun
/// only recomputes changed volumes. Unreadable volumes are logged and skipped.
ExtractResult cmd_extract(const PipelineConfig& config, std::ostream& log);

struct FeatureTable {
  FeatureMatrix x;
  LabelVector y;
  std::size_t thresholds = 0;
};

/// Reads a feature CSV; every row must be labelled.
FeatureTable load_feature_table(const std::filesystem::path& path);

/// The five curve blocks of the results tables, by column index.
struct FeatureSet {
  std::string name;  // B0, B1, B2, B1+B2, B0+B1+B2
  std::vector<std::size_t> columns;
};
std::vector<FeatureSet> standard_feature_sets(std::size_t thresholds);

/// Raw and selected runs for each standard feature set: 10 summary rows.
/// Reports, models, sweeps and the summary are written under output_dir.
std::vector<SummaryRow> cmd_train_eval(const PipelineConfig& config, std::ostream& log);

/// Per-class lower/median/upper curves:
/// `dim,t_index,t_value,class,lower,median,upper`.
void cmd_curves(const PipelineConfig& config, std::ostream& log);

/// pca_b0.csv, pca_b1.csv and pca_b2.csv, header
/// `sample,class,pc1=<ratio>,pc2=<ratio>`. Returns the blocks that failed
/// (zero variance), which are logged and skipped.
std::vector<std::string> cmd_pca(const PipelineConfig& config, std::ostream& log);

/// Phantom volumes plus manifest.csv under output_dir.
DatasetManifest cmd_synth(PhantomKind kind, std::size_t count, std::uint64_t seed,
                          const PhantomOptions& opt, const std::filesystem::path& out_dir,
                          std::ostream& log);

struct OracleCheckResult {
  std::size_t volumes = 0;
  std::size_t comparisons = 0;  // (volume, threshold) pairs
  std::size_t betti_mismatches = 0;
  std::size_t euler_mismatches = 0;
  bool ok() const noexcept { return betti_mismatches == 0 && euler_mismatches == 0; }
};

/// Random integer volumes up to max_side^3 compared against the dense rank
/// oracle and the Euler characteristic at every grid threshold.
OracleCheckResult cmd_oracle_check(std::size_t count, std::uint64_t seed, std::size_t max_side,
                                   std::ostream& log);

/// Hex FNV-1a 64 of a byte string.
std::string content_hash(std::string_view bytes);

}  // namespace voxbetti
