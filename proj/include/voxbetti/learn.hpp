#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "voxbetti/random.hpp"

namespace voxbetti {

/// Row-major samples x features. Values must be finite.
class FeatureMatrix {
public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols);
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }

  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
  FeatureMatrix select_columns(std::span<const std::size_t> cols) const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Binary labels: 1 is the positive class (HGG), 0 the negative (LGG).
using LabelVector = std::vector<int>;

enum class SplitCriterion { Entropy, Gini };

const char* criterion_name(SplitCriterion c) noexcept;
SplitCriterion parse_criterion(const std::string& name);

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double value = 0.0;  // leaf: P(class 1) for classifiers, additive weight for boosting

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary tree stored as a flat node array with the root at 0.
class DecisionTree {
public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const TreeNode& leaf_for(std::span<const double> x) const noexcept;
  double predict(std::span<const double> x) const noexcept { return leaf_for(x).value; }

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const;
  std::size_t split_count() const noexcept;

  /// Throws ErrorCode::Format unless every child index is in range and every
  /// split feature is below feature_count.
  void validate(std::size_t feature_count) const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

private:
  std::vector<TreeNode> nodes_;
};

struct TreeParams {
  SplitCriterion criterion = SplitCriterion::Entropy;
  std::size_t min_samples_split = 10;
  std::size_t max_depth = 0;     // 0 = unlimited
  std::size_t max_features = 0;  // non-constant features examined per split; 0 = all
};

/// Grows one classification tree. counts[i] is how often sample i was drawn
/// (zero = out of bag); min_samples_split compares against drawn samples while
/// class_weight scales impurity statistics. The weighted impurity decrease of
/// every split is added to importance[feature].
DecisionTree grow_classification_tree(const FeatureMatrix& x, std::span<const int> y,
                                      std::span<const std::uint32_t> counts,
                                      std::array<double, 2> class_weight,
                                      const TreeParams& params, Rng& rng,
                                      std::span<double> importance);

struct ForestParams {
  std::size_t n_estimators = 300;
  TreeParams tree;
  bool sqrt_features = true;  // max_features = floor(sqrt(d)) unless tree.max_features is set
  bool bootstrap = true;
  bool balanced_class_weight = false;
  std::uint64_t random_state = 0;
  int workers = 0;  // 0 resolves through resolve_workers
};

struct Prediction {
  int label;
  double score;  // estimated P(class 1)
};

class Forest {
public:
  Forest() = default;
  Forest(std::vector<DecisionTree> trees, std::vector<double> importance, std::size_t features,
         std::uint64_t seed);

  /// Mean positive-class leaf probability over trees.
  double score(std::span<const double> x) const;
  /// label = score >= 0.5, so an exact tie goes to class 1.
  Prediction predict(std::span<const double> x) const;

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  const std::vector<double>& importance() const noexcept { return importance_; }
  std::size_t feature_count() const noexcept { return features_; }
  std::uint64_t seed() const noexcept { return seed_; }

  friend bool operator==(const Forest&, const Forest&) = default;

private:
  std::vector<DecisionTree> trees_;
  std::vector<double> importance_;
  std::size_t features_ = 0;
  std::uint64_t seed_ = 0;
};

/// Trees are grown in parallel from per-tree seeds drawn up front, so the
/// result does not depend on the worker count.
Forest train_forest(const FeatureMatrix& x, std::span<const int> y, const ForestParams& params);

struct BoostedParams {
  std::size_t n_estimators = 1000;
  std::size_t max_depth = 25;
  double learning_rate = 0.1;
  double colsample_bytree = 0.4;
  double colsample_bylevel = 0.4;
  double reg_lambda = 1.0;
  double gamma = 0.0;
  double min_child_weight = 0.0;
  bool balanced_class_weight = false;
  std::uint64_t random_state = 0;
};

class BoostedModel {
public:
  BoostedModel() = default;
  BoostedModel(std::vector<DecisionTree> trees, double base_score, double learning_rate,
               std::vector<double> importance, std::size_t features);

  /// base + sum of eta * f_k(x), in log-odds.
  double margin(std::span<const double> x) const;
  double score(std::span<const double> x) const;
  Prediction predict(std::span<const double> x) const;

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  double base_score() const noexcept { return base_score_; }
  double learning_rate() const noexcept { return learning_rate_; }
  const std::vector<double>& importance() const noexcept { return importance_; }
  std::size_t feature_count() const noexcept { return features_; }

  /// Mean training log-loss before any tree and after each tree. Not persisted.
  std::vector<double> training_loss;

  friend bool operator==(const BoostedModel& a, const BoostedModel& b) {
    return a.trees_ == b.trees_ && a.base_score_ == b.base_score_ &&
           a.learning_rate_ == b.learning_rate_ && a.importance_ == b.importance_ &&
           a.features_ == b.features_;
  }

private:
  std::vector<DecisionTree> trees_;
  double base_score_ = 0.0;
  double learning_rate_ = 0.1;
  std::vector<double> importance_;
  std::size_t features_ = 0;
};

/// Newton boosting on the logistic loss with exact greedy splits.
BoostedModel train_boosted(const FeatureMatrix& x, std::span<const int> y,
                           const BoostedParams& params);

using Model = std::variant<Forest, BoostedModel>;

double model_score(const Model& m, std::span<const double> x);
Prediction model_predict(const Model& m, std::span<const double> x);
std::size_t model_feature_count(const Model& m) noexcept;

/// Normalized mean decrease in impurity (forest) or total split gain
/// (boosting); all zeros when the model never split.
const std::vector<double>& feature_importance(const Forest& m) noexcept;
const std::vector<double>& feature_importance(const BoostedModel& m) noexcept;
const std::vector<double>& feature_importance(const Model& m) noexcept;

/// Rescales to sum 1 in place; leaves an all-zero vector alone.
void normalize_importance(std::vector<double>& importance);

struct SelectedFeatureSet {
  double tau = 0.0;
  std::vector<std::size_t> indices;  // ascending
  std::string provenance;            // which model produced the importances
};

/// S_tau = { j : I_j >= tau }. Throws ErrorCode::EmptySelection when tau
/// exceeds every importance and ErrorCode::Config for negative tau.
SelectedFeatureSet select_features(std::span<const double> importance, double tau,
                                   std::string provenance = "forest");

struct SweepPoint {
  double tau;
  std::size_t selected;
  double validation_accuracy;
};

/// Trains on the first pair and returns accuracy on the second.
using FitAndScore = std::function<double(const FeatureMatrix&, std::span<const int>,
                                         const FeatureMatrix&, std::span<const int>)>;

/// One point per tau that selects at least one feature, in input order.
std::vector<SweepPoint> sweep_tau(const FeatureMatrix& train, std::span<const int> y_train,
                                  const FeatureMatrix& validation,
                                  std::span<const int> y_validation,
                                  std::span<const double> importance, std::span<const double> taus,
                                  const FitAndScore& fit);

/// Highest validation accuracy; ties go to the smaller feature set, then the
/// larger tau. Throws ErrorCode::EmptySelection on an empty sweep.
SweepPoint best_sweep_point(std::span<const SweepPoint> sweep);

/// Default sweep, scaled for 300 features whose importances sum to 1.
std::vector<double> default_tau_grid();

}  // namespace voxbetti
