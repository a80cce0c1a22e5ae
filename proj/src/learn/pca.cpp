#include "voxbetti/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "voxbetti/error.hpp"

namespace voxbetti {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double normalize(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
  return n;
}

void project_out(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& b : basis) {
    const double c = dot(v, b);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
  }
}

}  // namespace

PcaResult pca_project(const FeatureMatrix& x, std::size_t k) {
  const std::size_t n = x.rows(), d = x.cols();
  if (n < 2) throw Error(ErrorCode::InsufficientData, "PCA needs at least two samples");
  if (k == 0 || k > std::min(n - 1, d)) {
    throw Error(ErrorCode::OutOfRange, "component count must lie in [1, min(n - 1, d)]");
  }

  PcaResult out;
  out.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) out.mean[c] += x(r, c);
  }
  for (double& m : out.mean) m /= static_cast<double>(n);
  FeatureMatrix centered(n, d);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      centered(r, c) = x(r, c) - out.mean[c];
      total += centered(r, c) * centered(r, c);
    }
  }
  total /= static_cast<double>(n - 1);
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateCovariance, "all features are constant");

  // C v = X^T (X v) / (n - 1), never forming C.
  std::vector<double> scores(n);
  auto apply_covariance = [&](const std::vector<double>& v, std::vector<double>& out_v) {
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) s += centered(r, c) * v[c];
      scores[r] = s;
    }
    std::fill(out_v.begin(), out_v.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) out_v[c] += centered(r, c) * scores[r];
    }
    for (double& v_c : out_v) v_c /= static_cast<double>(n - 1);
  };

  Rng rng(0x9ca);
  std::vector<double> eigenvalues;
  std::vector<double> next(d);
  for (std::size_t comp = 0; comp < k; ++comp) {
    std::vector<double> v(d);
    for (double& c : v) c = uniform_unit(rng) - 0.5;
    project_out(v, out.components);
    normalize(v);

    double lambda = 0.0;
    for (std::size_t it = 0; it < kPowerMaxIterations; ++it) {
      apply_covariance(v, next);
      project_out(next, out.components);  // deflation
      lambda = normalize(next);
      if (lambda <= total * 1e-15) {
        // Remaining variance is nil; any unit vector orthogonal to the
        // previous components will do.
        lambda = 0.0;
        break;
      }
      double change = 0.0;
      for (std::size_t c = 0; c < d; ++c) change = std::max(change, std::abs(next[c] - v[c]));
      v.swap(next);
      if (change < kPowerTolerance) break;
    }

    const auto largest = std::max_element(v.begin(), v.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    if (*largest < 0.0) {
      for (double& c : v) c = -c;
    }
    eigenvalues.push_back(lambda);
    out.components.push_back(std::move(v));
  }

  // Power iteration on near-equal eigenvalues can return them slightly out
  // of order; report in decreasing order.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eigenvalues[a] > eigenvalues[b]; });
  std::vector<std::vector<double>> sorted;
  for (auto i : order) {
    sorted.push_back(out.components[i]);
    out.explained_ratio.push_back(std::min(1.0, eigenvalues[i] / total));
  }
  out.components = std::move(sorted);

  out.projected = FeatureMatrix(n, k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += centered(r, j) * out.components[c][j];
      out.projected(r, c) = s;
    }
  }
  return out;
}

}  // namespace voxbetti
