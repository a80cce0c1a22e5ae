#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voxbetti/manifest.hpp"

namespace voxbetti {

struct TrainTestSplit {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

inline constexpr double kTestFraction = 0.2;
inline constexpr std::size_t kMinPerClass = 5;

/// Stratified split: each class contributes llround(0.2 * n_c) test samples
/// drawn after a seeded shuffle. Needs kMinPerClass samples per class
/// (ErrorCode::InsufficientData otherwise).
TrainTestSplit split_80_20(std::span<const int> labels, std::uint64_t seed,
                           double test_fraction = kTestFraction);
TrainTestSplit split_80_20(const DatasetManifest& manifest, std::uint64_t seed);

/// Stratified k-fold: every sample lands in exactly one test fold, class
/// members dealt round-robin after a seeded shuffle.
std::vector<TrainTestSplit> stratified_k_fold(std::span<const int> labels, std::size_t k,
                                              std::uint64_t seed);

struct EvalReport {
  // Support-weighted averages over the two classes.
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> auc;  // empty when y_true has a single class

  std::array<std::array<std::size_t, 2>, 2> confusion{};  // [true][predicted]
  std::array<double, 2> class_precision{};
  std::array<double, 2> class_recall{};
  std::array<std::size_t, 2> support{};

  std::string protocol = "stratified 80:20";
  std::uint64_t split_seed = 0;
  std::string feature_set;  // e.g. "B1+B2, 42 features"

  std::size_t total() const noexcept;
};

/// Rank statistic U / (n+ n-) on the positive-class scores, ties counting
/// one half. ErrorCode::AucUndefined when either class is absent.
double roc_auc(std::span<const int> y_true, std::span<const double> scores);

/// All metrics; the AUC is left empty rather than thrown when undefined.
/// Precision of a class that is never predicted is 0.
EvalReport compute_metrics(std::span<const int> y_true, std::span<const int> y_pred,
                           std::span<const double> scores);

/// Aligned text table of one report.
void write_report_text(std::ostream& out, const EvalReport& r);
/// Flat key=value lines (accuracy=..., confusion_1_0=..., ...).
void write_report_kv(std::ostream& out, const EvalReport& r);
/// `true\predicted,LGG,HGG` then one row per true class.
void write_confusion_csv(std::ostream& out, const EvalReport& r);

/// Writes <stem>.txt, <stem>.kv and <stem>.confusion.csv under dir.
void write_report_files(const std::filesystem::path& dir, const std::string& stem,
                        const EvalReport& r);

struct SummaryRow {
  std::string model;
  std::string feature_set;
  bool selected = false;
  std::size_t features = 0;
  double tau = 0.0;
  EvalReport report;
};

/// Results table: one row per feature set and selection mode.
void write_summary_text(std::ostream& out, std::span<const SummaryRow> rows);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace voxbetti
