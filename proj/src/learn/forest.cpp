#include <cmath>

#include "training_data.hpp"
#include "voxbetti/parallel.hpp"

namespace voxbetti {

void normalize_importance(std::vector<double>& importance) {
  double sum = 0.0;
  for (double v : importance) sum += v;
  if (sum <= 0.0) return;
  for (double& v : importance) v /= sum;
}

Forest::Forest(std::vector<DecisionTree> trees, std::vector<double> importance,
               std::size_t features, std::uint64_t seed)
    : trees_(std::move(trees)), importance_(std::move(importance)), features_(features),
      seed_(seed) {
  if (trees_.empty()) throw Error(ErrorCode::Format, "forest without trees");
  if (importance_.size() != features_) throw Error(ErrorCode::Format, "importance length");
  for (const auto& t : trees_) t.validate(features_);
}

double Forest::score(std::span<const double> x) const {
  detail::check_width(features_, x.size());
  double sum = 0.0;
  for (const auto& t : trees_) sum += t.predict(x);
  return sum / static_cast<double>(trees_.size());
}

Prediction Forest::predict(std::span<const double> x) const {
  const double s = score(x);
  return {s >= 0.5 ? 1 : 0, s};
}

Forest train_forest(const FeatureMatrix& x, std::span<const int> y, const ForestParams& params) {
  const auto per_class = detail::check_training_data(x, y);
  if (params.n_estimators == 0) throw Error(ErrorCode::Config, "n_estimators must be positive");
  const auto weights = detail::class_weights(per_class, params.balanced_class_weight);

  TreeParams tree_params = params.tree;
  if (tree_params.max_features == 0 && params.sqrt_features) {
    tree_params.max_features = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(x.cols())))));
  }

  Rng master(params.random_state);
  std::vector<std::uint64_t> seeds(params.n_estimators);
  for (auto& s : seeds) s = master();

  const std::size_t n = x.rows();
  std::vector<DecisionTree> trees(params.n_estimators);
  std::vector<std::vector<double>> per_tree(params.n_estimators);
  parallel_for_index(params.n_estimators, resolve_workers(params.workers), [&](std::size_t t) {
    Rng rng(seeds[t]);
    std::vector<std::uint32_t> counts(n, params.bootstrap ? 0u : 1u);
    if (params.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) ++counts[uniform_below(rng, n)];
    }
    per_tree[t].assign(x.cols(), 0.0);
    trees[t] = grow_classification_tree(x, y, counts, weights, tree_params, rng, per_tree[t]);
    normalize_importance(per_tree[t]);
  });

  std::vector<double> importance(x.cols(), 0.0);
  for (const auto& imp : per_tree) {
    for (std::size_t j = 0; j < imp.size(); ++j) importance[j] += imp[j];
  }
  normalize_importance(importance);
  return Forest(std::move(trees), std::move(importance), x.cols(), params.random_state);
}

const std::vector<double>& feature_importance(const Forest& m) noexcept { return m.importance(); }

}  // namespace voxbetti
