#include <algorithm>
#include <cmath>
#include <numeric>

#include "voxbetti/error.hpp"
#include "voxbetti/learn.hpp"

namespace voxbetti {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::Shape, "feature matrix data does not match rows x cols");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidData, "non-finite feature value");
  }
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  FeatureMatrix out(rows.size(), cols_);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= rows_) throw Error(ErrorCode::OutOfRange, "row index out of range");
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(rows[r] * cols_), cols_,
                out.data_.begin() + static_cast<std::ptrdiff_t>(r * cols_));
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::size_t> cols) const {
  for (auto c : cols) {
    if (c >= cols_) throw Error(ErrorCode::OutOfRange, "column index out of range");
  }
  FeatureMatrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = (*this)(r, cols[c]);
  }
  return out;
}

const char* criterion_name(SplitCriterion c) noexcept {
  return c == SplitCriterion::Entropy ? "entropy" : "gini";
}

SplitCriterion parse_criterion(const std::string& name) {
  if (name == "entropy") return SplitCriterion::Entropy;
  if (name == "gini") return SplitCriterion::Gini;
  throw Error(ErrorCode::Config, "criterion must be entropy or gini, got '" + name + "'");
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const noexcept {
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf()) {
    node = &nodes_[x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                                 : node->right];
  }
  return *node;
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
  std::size_t deepest = 0;
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes_[i].is_leaf()) {
      stack.emplace_back(nodes_[i].left, d + 1);
      stack.emplace_back(nodes_[i].right, d + 1);
    }
  }
  return deepest;
}

std::size_t DecisionTree::split_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return !n.is_leaf(); }));
}

void DecisionTree::validate(std::size_t feature_count) const {
  if (nodes_.empty()) throw Error(ErrorCode::Format, "tree without nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.is_leaf()) {
      if (!std::isfinite(n.value)) throw Error(ErrorCode::Format, "non-finite leaf value");
      continue;
    }
    // Children always come after their parent, which rules out cycles.
    if (static_cast<std::size_t>(n.feature) >= feature_count || n.left <= i || n.right <= i ||
        n.left >= nodes_.size() || n.right >= nodes_.size()) {
      throw Error(ErrorCode::Format, "malformed tree node " + std::to_string(i));
    }
  }
}

namespace {

double impurity(SplitCriterion c, double w0, double w1) {
  const double w = w0 + w1;
  if (w <= 0.0) return 0.0;
  const double p0 = w0 / w, p1 = w1 / w;
  if (c == SplitCriterion::Gini) return 1.0 - p0 * p0 - p1 * p1;
  double h = 0.0;
  if (p0 > 0.0) h -= p0 * std::log2(p0);
  if (p1 > 0.0) h -= p1 * std::log2(p1);
  return h;
}

// Splits below this gain are treated as no improvement; it absorbs rounding
// in the impurity arithmetic.
constexpr double kMinGain = 1e-12;

class TreeGrower {
public:
  TreeGrower(const FeatureMatrix& x, std::span<const int> y, std::span<const std::uint32_t> counts,
             std::array<double, 2> class_weight, const TreeParams& params, Rng& rng,
             std::span<double> importance)
      : x_(x), y_(y), counts_(counts), cw_(class_weight), params_(params), rng_(rng),
        importance_(importance), features_(x.cols()) {
    std::iota(features_.begin(), features_.end(), std::size_t{0});
  }

  DecisionTree grow() {
    std::vector<std::uint32_t> samples;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (counts_[i] > 0) samples.push_back(static_cast<std::uint32_t>(i));
    }
    grow_node(samples, 0);
    return DecisionTree(std::move(nodes_));
  }

private:
  struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = kMinGain;
    bool found = false;
  };

  double weight(std::uint32_t s) const {
    return counts_[s] * cw_[static_cast<std::size_t>(y_[s])];
  }

  std::uint32_t grow_node(std::vector<std::uint32_t>& samples, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();

    double w0 = 0.0, w1 = 0.0;
    std::size_t drawn = 0;
    for (auto s : samples) {
      (y_[s] ? w1 : w0) += weight(s);
      drawn += counts_[s];
    }
    const double total = w0 + w1;
    nodes_[id].value = total > 0.0 ? w1 / total : 0.5;

    const bool pure = w0 == 0.0 || w1 == 0.0;
    const bool too_deep = params_.max_depth > 0 && depth >= params_.max_depth;
    if (pure || too_deep || drawn < params_.min_samples_split) return id;

    const Split split = best_split(samples, w0, w1);
    if (!split.found) return id;

    importance_[split.feature] += total * split.gain;
    std::vector<std::uint32_t> left, right;
    for (auto s : samples) {
      (x_(s, split.feature) <= split.threshold ? left : right).push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();

    nodes_[id].feature = static_cast<std::int32_t>(split.feature);
    nodes_[id].threshold = split.threshold;
    const auto l = grow_node(left, depth + 1);
    const auto r = grow_node(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  // Examines features in random order until max_features non-constant ones
  // have been scored (constant features do not count toward the budget).
  Split best_split(const std::vector<std::uint32_t>& samples, double w0, double w1) {
    const std::size_t budget =
        params_.max_features == 0 ? features_.size() : params_.max_features;
    const double parent = impurity(params_.criterion, w0, w1);
    const double total = w0 + w1;
    Split best;
    std::size_t scored = 0;
    order_.resize(samples.size());
    for (std::size_t i = 0; i < features_.size() && scored < budget; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_below(rng_, features_.size() - i));
      std::swap(features_[i], features_[j]);
      const std::size_t f = features_[i];

      for (std::size_t k = 0; k < samples.size(); ++k) order_[k] = {x_(samples[k], f), samples[k]};
      std::sort(order_.begin(), order_.end());
      if (order_.front().first == order_.back().first) continue;
      ++scored;

      double l0 = 0.0, l1 = 0.0;
      for (std::size_t k = 0; k + 1 < order_.size(); ++k) {
        const auto s = order_[k].second;
        (y_[s] ? l1 : l0) += weight(s);
        const double a = order_[k].first, b = order_[k + 1].first;
        if (a == b) continue;
        const double wl = l0 + l1, wr = total - wl;
        const double gain = parent - (wl / total) * impurity(params_.criterion, l0, l1) -
                            (wr / total) * impurity(params_.criterion, w0 - l0, w1 - l1);
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
  std::span<const int> y_;
  std::span<const std::uint32_t> counts_;
  std::array<double, 2> cw_;
  const TreeParams& params_;
  Rng& rng_;
  std::span<double> importance_;
  std::vector<std::size_t> features_;
  std::vector<std::pair<double, std::uint32_t>> order_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree grow_classification_tree(const FeatureMatrix& x, std::span<const int> y,
                                      std::span<const std::uint32_t> counts,
                                      std::array<double, 2> class_weight,
                                      const TreeParams& params, Rng& rng,
                                      std::span<double> importance) {
  if (y.size() != x.rows() || counts.size() != x.rows()) {
    throw Error(ErrorCode::Shape, "labels and counts must match the sample count");
  }
  if (importance.size() != x.cols()) throw Error(ErrorCode::Shape, "importance length");
  return TreeGrower(x, y, counts, class_weight, params, rng, importance).grow();
}

}  // namespace voxbetti
