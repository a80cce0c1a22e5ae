#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voxbetti/homology.hpp"
#include "voxbetti/manifest.hpp"
#include "voxbetti/volume.hpp"

namespace voxbetti {

/// Strictly increasing thresholds t_1 < ... < t_N at which curves are sampled.
class ThresholdGrid {
public:
  explicit ThresholdGrid(std::vector<double> values);

  /// N thresholds evenly spaced over [lo, hi], endpoints included.
  static ThresholdGrid uniform(std::size_t n = 100, double lo = 0.0, double hi = 255.0);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

private:
  std::vector<double> values_;
};

inline constexpr std::size_t kDefaultThresholds = 100;

/// Betti curves for dimensions 0..2, concatenated as [beta0 | beta1 | beta2].
struct BettiFeatureVector {
  std::array<std::vector<std::uint32_t>, 3> curves;
  std::optional<Label> label;

  std::size_t thresholds() const noexcept { return curves[0].size(); }
  std::size_t size() const noexcept { return 3 * thresholds(); }
  std::vector<std::uint32_t> concatenated() const;
  /// Conversion to model input.
  std::vector<double> as_features() const;

  friend bool operator==(const BettiFeatureVector&, const BettiFeatureVector&) = default;
};

/// Entry n counts pairs with birth <= t_n < death.
std::vector<std::uint32_t> betti_curve(const PersistenceDiagram& d, const ThresholdGrid& g);

BettiFeatureVector featurize_diagrams(const DiagramSet& diagrams, const ThresholdGrid& g);

/// Filtration, persistence in dimensions 0..2, and the three curves.
BettiFeatureVector featurize(const Volume3D& v,
                             const ThresholdGrid& g = ThresholdGrid::uniform());

/// One volume per worker; output in input order regardless of `workers`.
std::vector<BettiFeatureVector> featurize_batch(std::span<const Volume3D> volumes,
                                                const ThresholdGrid& g, int workers = 0);
/// Reference loop for featurize_batch.
std::vector<BettiFeatureVector> featurize_batch_serial(std::span<const Volume3D> volumes,
                                                       const ThresholdGrid& g);

/// Linear-interpolated percentile (q in [0, 100]) of a non-empty sample.
double percentile(std::vector<double> sample, double q);

struct CurveBand {
  std::vector<double> lower;
  std::vector<double> median;
  std::vector<double> upper;
};

/// Per-class pointwise median with a central band of width `band`: the
/// (50 - 50*band)th to (50 + 50*band)th percentiles.
struct CurveSummary {
  double band = 0.4;
  std::map<Label, std::array<CurveBand, 3>> classes;
};

/// Requires at least one labelled vector for each of LGG and HGG.
CurveSummary summarize_curves(std::span<const BettiFeatureVector> vectors, double band);

// Feature matrix CSV: `label,b0_000,...,b2_099`, one row per volume.

std::string feature_column_name(int dim, std::size_t index, std::size_t thresholds);
void write_feature_csv(std::ostream& out, std::span<const BettiFeatureVector> rows);
void write_feature_csv(const std::filesystem::path& path, std::span<const BettiFeatureVector> rows);
std::vector<BettiFeatureVector> read_feature_csv(std::istream& in);
std::vector<BettiFeatureVector> read_feature_csv(const std::filesystem::path& path);
/// One CSV row without the trailing newline.
std::string feature_csv_row(const BettiFeatureVector& row);
std::string feature_csv_header(std::size_t thresholds);

}  // namespace voxbetti
