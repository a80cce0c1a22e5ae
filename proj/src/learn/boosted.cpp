#include <algorithm>
#include <cmath>
#include <numeric>

#include "training_data.hpp"

namespace voxbetti {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Clamped so a saturated margin cannot produce log(0).
double log_loss(double p, int y) {
  constexpr double eps = 1e-15;
  p = std::clamp(p, eps, 1.0 - eps);
  return y ? -std::log(p) : -std::log(1.0 - p);
}

constexpr double kMinGain = 1e-12;

std::size_t sample_size(double rate, std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(rate * static_cast<double>(n)));
}

class RoundTreeBuilder {
public:
  RoundTreeBuilder(const FeatureMatrix& x, std::span<const double> g, std::span<const double> h,
                   const BoostedParams& p, Rng& rng, std::span<double> gain_by_feature)
      : x_(x), g_(g), h_(h), p_(p), rng_(rng), gain_by_feature_(gain_by_feature) {}

  DecisionTree build() {
    std::vector<std::size_t> columns(x_.cols());
    std::iota(columns.begin(), columns.end(), std::size_t{0});
    const std::size_t per_tree = sample_size(p_.colsample_bytree, columns.size());
    partial_shuffle(columns, per_tree, rng_);
    columns.resize(per_tree);

    std::vector<std::uint32_t> all(x_.rows());
    std::iota(all.begin(), all.end(), std::uint32_t{0});
    nodes_.assign(1, TreeNode{});
    std::vector<Pending> level{{0, std::move(all)}};

    for (std::size_t depth = 0; !level.empty(); ++depth) {
      std::vector<std::size_t> level_columns = columns;
      const std::size_t per_level = sample_size(p_.colsample_bylevel, level_columns.size());
      partial_shuffle(level_columns, per_level, rng_);
      level_columns.resize(per_level);

      std::vector<Pending> next;
      for (auto& node : level) {
        double gs = 0.0, hs = 0.0;
        for (auto s : node.samples) {
          gs += g_[s];
          hs += h_[s];
        }
        nodes_[node.id].value = -gs / (hs + p_.reg_lambda);
        if (depth >= p_.max_depth) continue;

        const Split split = best_split(node.samples, level_columns, gs, hs);
        if (!split.found) continue;
        gain_by_feature_[split.feature] += split.gain;

        std::vector<std::uint32_t> left, right;
        for (auto s : node.samples) {
          (x_(s, split.feature) <= split.threshold ? left : right).push_back(s);
        }
        const auto l = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_.emplace_back();
        auto& parent = nodes_[node.id];
        parent.feature = static_cast<std::int32_t>(split.feature);
        parent.threshold = split.threshold;
        parent.left = l;
        parent.right = l + 1;
        parent.value = 0.0;
        next.push_back({l, std::move(left)});
        next.push_back({l + 1, std::move(right)});
      }
      level = std::move(next);
    }
    return DecisionTree(std::move(nodes_));
  }

private:
  struct Pending {
    std::uint32_t id;
    std::vector<std::uint32_t> samples;
  };
  struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = kMinGain;
    bool found = false;
  };

  double score(double g, double h) const { return g * g / (h + p_.reg_lambda); }

  Split best_split(const std::vector<std::uint32_t>& samples,
                   const std::vector<std::size_t>& columns, double gs, double hs) {
    Split best;
    const double parent = score(gs, hs);
    order_.resize(samples.size());
    for (const std::size_t f : columns) {
      for (std::size_t k = 0; k < samples.size(); ++k) order_[k] = {x_(samples[k], f), samples[k]};
      std::sort(order_.begin(), order_.end());
      double gl = 0.0, hl = 0.0;
      for (std::size_t k = 0; k + 1 < order_.size(); ++k) {
        gl += g_[order_[k].second];
        hl += h_[order_[k].second];
        const double a = order_[k].first, b = order_[k + 1].first;
        if (a == b) continue;
        const double hr = hs - hl;
        if (hl < p_.min_child_weight || hr < p_.min_child_weight) continue;
        const double gain = 0.5 * (score(gl, hl) + score(gs - gl, hr) - parent) - p_.gamma;
        if (gain > best.gain) {
          double mid = a + (b - a) / 2.0;
          if (!(mid < b)) mid = a;
          best = {f, mid, gain, true};
        }
      }
    }
    return best;
  }

  const FeatureMatrix& x_;
  std::span<const double> g_;
  std::span<const double> h_;
  const BoostedParams& p_;
  Rng& rng_;
  std::span<double> gain_by_feature_;
  std::vector<std::pair<double, std::uint32_t>> order_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

BoostedModel::BoostedModel(std::vector<DecisionTree> trees, double base_score,
                           double learning_rate, std::vector<double> importance,
                           std::size_t features)
    : trees_(std::move(trees)), base_score_(base_score), learning_rate_(learning_rate),
      importance_(std::move(importance)), features_(features) {
  if (importance_.size() != features_) throw Error(ErrorCode::Format, "importance length");
  if (!std::isfinite(base_score_) || !std::isfinite(learning_rate_)) {
    throw Error(ErrorCode::Format, "non-finite boosting parameters");
  }
  for (const auto& t : trees_) t.validate(features_);
}

double BoostedModel::margin(std::span<const double> x) const {
  detail::check_width(features_, x.size());
  double z = base_score_;
  for (const auto& t : trees_) z += learning_rate_ * t.predict(x);
  return z;
}

double BoostedModel::score(std::span<const double> x) const { return sigmoid(margin(x)); }

Prediction BoostedModel::predict(std::span<const double> x) const {
  const double s = score(x);
  return {s >= 0.5 ? 1 : 0, s};
}

BoostedModel train_boosted(const FeatureMatrix& x, std::span<const int> y,
                           const BoostedParams& params) {
  const auto per_class = detail::check_training_data(x, y);
  if (!(params.learning_rate > 0.0) || !(params.reg_lambda >= 0.0) || !(params.gamma >= 0.0) ||
      !(params.colsample_bytree > 0.0 && params.colsample_bytree <= 1.0) ||
      !(params.colsample_bylevel > 0.0 && params.colsample_bylevel <= 1.0)) {
    throw Error(ErrorCode::Config, "boosting parameters out of range");
  }
  const auto cw = detail::class_weights(per_class, params.balanced_class_weight);
  const std::size_t n = x.rows();

  std::vector<double> w(n);
  double w_total = 0.0, w_pos = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = cw[static_cast<std::size_t>(y[i])];
    w_total += w[i];
    if (y[i]) w_pos += w[i];
  }
  const double prior = w_pos / w_total;
  const double base = std::log(prior / (1.0 - prior));

  std::vector<double> margin(n, base), g(n), h(n);
  auto mean_loss = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += w[i] * log_loss(sigmoid(margin[i]), y[i]);
    return sum / w_total;
  };

  Rng rng(params.random_state);
  std::vector<DecisionTree> trees;
  std::vector<double> gains(x.cols(), 0.0);
  std::vector<double> history{mean_loss()};

  for (std::size_t round = 0; round < params.n_estimators; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      g[i] = w[i] * (p - y[i]);
      h[i] = w[i] * p * (1.0 - p);
    }
    DecisionTree tree = RoundTreeBuilder(x, g, h, params, rng, gains).build();
    if (tree.split_count() == 0) {
      // An unlucky column sample is not convergence: stop only when no column
      // at all offers a positive-gain root split. Otherwise keep the stump.
      BoostedParams probe = params;
      probe.colsample_bytree = probe.colsample_bylevel = 1.0;
      probe.max_depth = std::min<std::size_t>(params.max_depth, 1);
      std::vector<double> scratch(x.cols(), 0.0);
      if (RoundTreeBuilder(x, g, h, probe, rng, scratch).build().split_count() == 0) break;
    }
    for (std::size_t i = 0; i < n; ++i) margin[i] += params.learning_rate * tree.predict(x.row(i));
    trees.push_back(std::move(tree));
    history.push_back(mean_loss());
  }

  normalize_importance(gains);
  BoostedModel model(std::move(trees), base, params.learning_rate, std::move(gains), x.cols());
  model.training_loss = std::move(history);
  return model;
}

const std::vector<double>& feature_importance(const BoostedModel& m) noexcept {
  return m.importance();
}

}  // namespace voxbetti
