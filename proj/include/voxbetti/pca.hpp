#pragma once

#include <cstddef>
#include <vector>

#include "voxbetti/learn.hpp"

namespace voxbetti {

struct PcaResult {
  FeatureMatrix projected;                      // samples x k scores
  std::vector<double> explained_ratio;          // eigenvalue / total variance, non-increasing
  std::vector<std::vector<double>> components;  // unit eigenvectors, largest |entry| positive
  std::vector<double> mean;                     // column means removed before projecting
};

inline constexpr double kPowerTolerance = 1e-9;
inline constexpr std::size_t kPowerMaxIterations = 10000;

/// Top-k principal components by power iteration with deflation. Needs
/// 2 <= rows and 1 <= k <= min(rows - 1, cols); zero total variance raises
/// ErrorCode::DegenerateCovariance.
PcaResult pca_project(const FeatureMatrix& x, std::size_t k);

}  // namespace voxbetti
