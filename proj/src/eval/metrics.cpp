#include <algorithm>
#include <cmath>
#include <numeric>

#include "voxbetti/error.hpp"
#include "voxbetti/eval.hpp"

namespace voxbetti {

std::size_t EvalReport::total() const noexcept {
  return confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1];
}

namespace {

void check_binary(std::span<const int> v, const char* what) {
  for (int x : v) {
    if (x != 0 && x != 1) throw Error(ErrorCode::InvalidData, std::string(what) + " must be 0 or 1");
  }
}

void check_scores(std::span<const double> scores) {
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::InvalidData, "scores must lie in [0, 1]");
  }
}

}  // namespace

double roc_auc(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) throw Error(ErrorCode::Shape, "labels and scores differ in length");
  check_binary(y_true, "labels");
  check_scores(scores);
  const auto n = y_true.size();
  const auto n_pos = static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
  const auto n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorCode::AucUndefined, "ground truth contains a single class");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

  // Mid-ranks: a tied block [i, j) shares rank (i + j + 1) / 2, which is how
  // ties come to count one half. Doubled to stay in integers.
  std::uint64_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const std::uint64_t twice_rank = i + j + 1;
    for (std::size_t k = i; k < j; ++k) {
      if (y_true[order[k]] == 1) twice_rank_sum += twice_rank;
    }
    i = j;
  }
  const double u = (static_cast<double>(twice_rank_sum) -
                    static_cast<double>(n_pos) * static_cast<double>(n_pos + 1)) /
                   2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

EvalReport compute_metrics(std::span<const int> y_true, std::span<const int> y_pred,
                           std::span<const double> scores) {
  if (y_true.size() != y_pred.size() || y_true.size() != scores.size()) {
    throw Error(ErrorCode::Shape, "metric inputs differ in length");
  }
  if (y_true.empty()) throw Error(ErrorCode::InvalidData, "no samples to evaluate");
  check_binary(y_true, "labels");
  check_binary(y_pred, "predictions");
  check_scores(scores);

  EvalReport r;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ++r.confusion[static_cast<std::size_t>(y_true[i])][static_cast<std::size_t>(y_pred[i])];
  }
  const auto n = static_cast<double>(y_true.size());
  r.accuracy = static_cast<double>(r.confusion[0][0] + r.confusion[1][1]) / n;
  for (std::size_t c = 0; c < 2; ++c) {
    const std::size_t tp = r.confusion[c][c];
    const std::size_t predicted = r.confusion[0][c] + r.confusion[1][c];
    r.support[c] = r.confusion[c][0] + r.confusion[c][1];
    r.class_precision[c] = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    r.class_recall[c] = r.support[c] ? static_cast<double>(tp) / static_cast<double>(r.support[c]) : 0.0;
    const double p = r.class_precision[c], q = r.class_recall[c];
    const double f1 = p + q > 0.0 ? 2.0 * p * q / (p + q) : 0.0;
    const double w = static_cast<double>(r.support[c]) / n;
    r.precision += w * p;
    r.recall += w * q;
    r.f1 += w * f1;
  }
  if (r.support[0] > 0 && r.support[1] > 0) r.auc = roc_auc(y_true, scores);
  return r;
}

}  // namespace voxbetti
