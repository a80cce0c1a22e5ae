#include <algorithm>
#include <cmath>

#include "voxbetti/error.hpp"
#include "voxbetti/learn.hpp"

namespace voxbetti {

double model_score(const Model& m, std::span<const double> x) {
  return std::visit([&](const auto& model) { return model.score(x); }, m);
}

Prediction model_predict(const Model& m, std::span<const double> x) {
  return std::visit([&](const auto& model) { return model.predict(x); }, m);
}

std::size_t model_feature_count(const Model& m) noexcept {
  return std::visit([](const auto& model) { return model.feature_count(); }, m);
}

const std::vector<double>& feature_importance(const Model& m) noexcept {
  return std::visit([](const auto& model) -> const std::vector<double>& {
    return model.importance();
  }, m);
}

SelectedFeatureSet select_features(std::span<const double> importance, double tau,
                                   std::string provenance) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::Config, "tau must be a finite non-negative number");
  }
  SelectedFeatureSet out{tau, {}, std::move(provenance)};
  for (std::size_t j = 0; j < importance.size(); ++j) {
    if (importance[j] >= tau) out.indices.push_back(j);
  }
  if (out.indices.empty()) {
    throw Error(ErrorCode::EmptySelection,
                "no importance reaches tau = " + std::to_string(tau));
  }
  return out;
}

std::vector<SweepPoint> sweep_tau(const FeatureMatrix& train, std::span<const int> y_train,
                                  const FeatureMatrix& validation,
                                  std::span<const int> y_validation,
                                  std::span<const double> importance, std::span<const double> taus,
                                  const FitAndScore& fit) {
  if (importance.size() != train.cols() || validation.cols() != train.cols()) {
    throw Error(ErrorCode::Shape, "sweep inputs disagree on the feature count");
  }
  const double top = importance.empty() ? 0.0 : *std::max_element(importance.begin(), importance.end());
  std::vector<SweepPoint> sweep;
  for (const double tau : taus) {
    if (tau > top) continue;
    const auto selected = select_features(importance, tau);
    const double acc = fit(train.select_columns(selected.indices), y_train,
                           validation.select_columns(selected.indices), y_validation);
    sweep.push_back({tau, selected.indices.size(), acc});
  }
  return sweep;
}

SweepPoint best_sweep_point(std::span<const SweepPoint> sweep) {
  if (sweep.empty()) throw Error(ErrorCode::EmptySelection, "tau sweep selected nothing");
  SweepPoint best = sweep.front();
  for (const auto& p : sweep.subspan(1)) {
    const bool better =
        p.validation_accuracy > best.validation_accuracy ||
        (p.validation_accuracy == best.validation_accuracy &&
         (p.selected < best.selected || (p.selected == best.selected && p.tau > best.tau)));
    if (better) best = p;
  }
  return best;
}

std::vector<double> default_tau_grid() {
  return {0.0, 0.001, 0.002, 0.003, 0.005, 0.0075, 0.01, 0.015, 0.02, 0.03};
}

}  // namespace voxbetti
