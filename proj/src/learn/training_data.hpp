#pragma once

#include <span>
#include <string>

#include "voxbetti/error.hpp"
#include "voxbetti/learn.hpp"

namespace voxbetti::detail {

/// Preconditions shared by both ensembles: matching lengths, 0/1 labels,
/// at least two samples and both classes present.
inline std::array<std::size_t, 2> check_training_data(const FeatureMatrix& x,
                                                      std::span<const int> y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::Shape, std::to_string(x.rows()) + " samples but " +
                                      std::to_string(y.size()) + " labels");
  }
  if (x.cols() == 0) throw Error(ErrorCode::Shape, "no features");
  std::array<std::size_t, 2> per_class{0, 0};
  for (int label : y) {
    if (label != 0 && label != 1) throw Error(ErrorCode::InvalidData, "labels must be 0 or 1");
    ++per_class[static_cast<std::size_t>(label)];
  }
  if (x.rows() < 2 || per_class[0] == 0 || per_class[1] == 0) {
    throw Error(ErrorCode::DegenerateLabels, "training data needs samples of both classes");
  }
  return per_class;
}

/// n / (2 n_c), the usual balanced weighting; all ones when disabled.
inline std::array<double, 2> class_weights(std::array<std::size_t, 2> per_class, bool balanced) {
  if (!balanced) return {1.0, 1.0};
  const double n = static_cast<double>(per_class[0] + per_class[1]);
  return {n / (2.0 * static_cast<double>(per_class[0])),
          n / (2.0 * static_cast<double>(per_class[1]))};
}

inline void check_width(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw Error(ErrorCode::Shape, "model expects " + std::to_string(expected) +
                                      " features, got " + std::to_string(got));
  }
}

}  // namespace voxbetti::detail
