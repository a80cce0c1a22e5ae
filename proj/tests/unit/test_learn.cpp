#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

#include "expect_error.hpp"
#include "generators.hpp"
#include "voxbetti/model_io.hpp"
#include "voxbetti/pca.hpp"

using namespace voxbetti;

namespace {

ForestParams small_forest(std::size_t trees = 25, std::uint64_t seed = 0) {
  ForestParams p;
  p.n_estimators = trees;
  p.random_state = seed;
  return p;
}

double train_accuracy(const Model& m, const FeatureMatrix& x, std::span<const int> y) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < x.rows(); ++r) hits += model_predict(m, x.row(r)).label == y[r];
  return static_cast<double>(hits) / static_cast<double>(x.rows());
}

DecisionTree leaf(double p) { return DecisionTree({TreeNode{-1, 0.0, 0, 0, p}}); }

// Cyclic Jacobi eigen-decomposition of a small symmetric matrix: an
// independent route to the principal axes.
struct Eigen {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // vectors[k] is the k-th eigenvector
};

Eigen jacobi(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a[i][i] > a[j][j]; });
  Eigen out;
  for (auto k : order) {
    out.values.push_back(a[k][k]);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v[i][k];
    out.vectors.push_back(col);
  }
  return out;
}

std::vector<std::vector<double>> covariance(const FeatureMatrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> mean(d, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) mean[c] += x(r, c) / static_cast<double>(n);
  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        cov[i][j] += (x(r, i) - mean[i]) * (x(r, j) - mean[j]) / static_cast<double>(n - 1);
  return cov;
}

}  // namespace

// ---------------------------------------------------------------- forest

TEST_CASE("forest on the four-point separable example") {
  const FeatureMatrix x(4, 1, {0, 0, 1, 1});
  const std::vector<int> y{0, 0, 1, 1};
  auto params = small_forest(50);
  params.tree.min_samples_split = 2;  // the default of 10 would keep four samples in one leaf
  const Model m = train_forest(x, y, params);
  CHECK(train_accuracy(m, x, y) == 1.0);
  for (const auto& t : std::get<Forest>(m).trees()) {
    CHECK(t.split_count() <= 1);
    if (t.split_count() == 1) CHECK(t.nodes()[0].threshold == 0.5);
  }

  params.bootstrap = false;
  const auto plain = train_forest(x, y, params);
  for (const auto& t : plain.trees()) {
    REQUIRE(t.split_count() == 1);
    CHECK(t.nodes()[0].threshold == 0.5);
  }
}

TEST_CASE("property: forests fit separable data perfectly") {
  Rng rng(40);
  for (int trial = 0; trial < 10; ++trial) {
    const auto y = gen::balanced_labels(20);
    const auto x = gen::clusters(rng, y, 6, 2, 2.0);
    auto params = small_forest(30, static_cast<std::uint64_t>(trial));
    params.tree.min_samples_split = 2;
    CHECK(train_accuracy(train_forest(x, y, params), x, y) == 1.0);
  }
}

TEST_CASE("forest importance: constant features get zero, the total is one") {
  Rng rng(41);
  const auto y = gen::balanced_labels(30);
  auto x = gen::clusters(rng, y, 5, 2, 0.7);
  for (std::size_t r = 0; r < x.rows(); ++r) x(r, 4) = 3.0;
  const auto f = train_forest(x, y, small_forest(60));
  const auto& imp = feature_importance(f);
  CHECK(imp[4] == 0.0);
  CHECK(std::accumulate(imp.begin(), imp.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : imp) CHECK(v >= 0.0);
}

TEST_CASE("forest importance: a single informative feature takes all of it") {
  Rng rng(42);
  const auto y = gen::balanced_labels(15);
  FeatureMatrix x(y.size(), 6);
  for (std::size_t r = 0; r < y.size(); ++r) {
    for (std::size_t c = 0; c < 6; ++c) x(r, c) = 1.0;
    x(r, 3) = y[r] + 0.1 * uniform_unit(rng);
  }
  auto params = small_forest(20);
  params.bootstrap = false;
  const auto f = train_forest(x, y, params);
  const auto& imp = feature_importance(f);
  CHECK(imp[3] == doctest::Approx(1.0));
  for (std::size_t c : {0, 1, 2, 4, 5}) CHECK(imp[c] == 0.0);
  for (const auto& t : f.trees()) CHECK(t.split_count() == 1);
}

TEST_CASE("forest importance: a duplicated column splits its share") {
  // Paired seeds: each forest on X is matched with one on [X | X_0]. Every
  // split examines all columns; under sqrt(d) sampling the copy would also
  // double the column's chance of being drawn, which biases the sum upward.
  Rng rng(43);
  const auto y = gen::balanced_labels(40);
  FeatureMatrix x(y.size(), 4);
  for (std::size_t r = 0; r < y.size(); ++r) {
    for (std::size_t c = 0; c < 4; ++c) x(r, c) = uniform_unit(rng);
    x(r, 0) += 0.8 * y[r];
  }
  const std::vector<std::size_t> dup_cols{0, 1, 2, 3, 0};
  const auto x_dup = x.select_columns(dup_cols);
  double original = 0.0, combined = 0.0;
  const int seeds = 8;
  for (int s = 0; s < seeds; ++s) {
    auto params = small_forest(100, static_cast<std::uint64_t>(s));
    params.sqrt_features = false;
    const auto a = train_forest(x, y, params);
    const auto b = train_forest(x_dup, y, params);
    original += a.importance()[0] / seeds;
    combined += (b.importance()[0] + b.importance()[4]) / seeds;
  }
  CHECK(std::abs(original - combined) <= 0.05);
}

TEST_CASE("forest determinism and worker-count invariance") {
  Rng rng(44);
  const auto y = gen::balanced_labels(25);
  const auto x = gen::clusters(rng, y, 8, 3, 0.5);
  auto params = small_forest(40, 7);
  params.workers = 1;
  const auto one = train_forest(x, y, params);
  CHECK(train_forest(x, y, params) == one);
  params.workers = 3;
  CHECK(train_forest(x, y, params) == one);
  params.random_state = 8;
  CHECK_FALSE(train_forest(x, y, params) == one);
}

TEST_CASE("forest prediction: mean leaf probability with ties to class 1") {
  const Forest split({leaf(0.4), leaf(0.6)}, {0.0}, 1, 0);
  const auto p = split.predict(std::vector<double>{0.0});
  CHECK(p.score == 0.5);
  CHECK(p.label == 1);

  const Forest reversed({leaf(0.6), leaf(0.4)}, {0.0}, 1, 0);
  CHECK(reversed.score(std::vector<double>{0.0}) == p.score);

  const Forest sure({leaf(1.0), leaf(1.0), leaf(1.0)}, {0.0}, 1, 0);
  CHECK(sure.predict(std::vector<double>{0.0}).score == 1.0);
  CHECK(sure.predict(std::vector<double>{0.0}).label == 1);

  CHECK_ERROR_CODE(split.predict(std::vector<double>{0.0, 1.0}), ErrorCode::Shape);
}

TEST_CASE("training input errors") {
  const FeatureMatrix x(4, 1, {0, 1, 2, 3});
  CHECK_ERROR_CODE(train_forest(x, std::vector<int>{1, 1, 1, 1}, small_forest()),
                   ErrorCode::DegenerateLabels);
  CHECK_ERROR_CODE(train_boosted(x, std::vector<int>{0, 0, 0, 0}, {}), ErrorCode::DegenerateLabels);
  CHECK_ERROR_CODE(train_forest(x, std::vector<int>{0, 1, 0}, small_forest()), ErrorCode::Shape);
  CHECK_ERROR_CODE(FeatureMatrix(1, 2, {0.0, std::nan("")}), ErrorCode::InvalidData);
}

TEST_CASE("property: positive column scaling leaves tree structure and predictions unchanged") {
  Rng rng(45);
  for (int trial = 0; trial < 12; ++trial) {
    const auto y = gen::balanced_labels(15);
    const auto x = gen::clusters(rng, y, 4, 2, 0.6);
    const std::size_t col = uniform_below(rng, 4);
    // Power-of-two factors make scaled midpoints exact, so thresholds must
    // scale exactly too.
    const double a = std::ldexp(1.0, static_cast<int>(uniform_below(rng, 9)) - 4);
    FeatureMatrix xs = x;
    for (std::size_t r = 0; r < xs.rows(); ++r) xs(r, col) *= a;
    const auto params = small_forest(15, static_cast<std::uint64_t>(trial));
    const auto f = train_forest(x, y, params);
    const auto g = train_forest(xs, y, params);
    for (std::size_t t = 0; t < f.trees().size(); ++t) {
      const auto& n1 = f.trees()[t].nodes();
      const auto& n2 = g.trees()[t].nodes();
      REQUIRE(n1.size() == n2.size());
      for (std::size_t i = 0; i < n1.size(); ++i) {
        CHECK(n1[i].feature == n2[i].feature);
        CHECK(n1[i].value == n2[i].value);
        const double want = n1[i].feature == static_cast<int>(col) ? a * n1[i].threshold : n1[i].threshold;
        CHECK(n2[i].threshold == want);
      }
    }
    for (std::size_t r = 0; r < x.rows(); ++r) CHECK(f.score(x.row(r)) == g.score(xs.row(r)));
    CHECK(f.importance() == g.importance());
  }
}

TEST_CASE("grow_classification_tree respects min_samples_split and max_depth") {
  Rng rng(46);
  const auto y = gen::balanced_labels(30);
  const auto x = gen::clusters(rng, y, 3, 3, 0.3);
  std::vector<std::uint32_t> counts(y.size(), 1);
  std::vector<double> importance(3, 0.0);
  TreeParams p;
  p.max_depth = 2;
  p.min_samples_split = 2;
  Rng tree_rng(1);
  const auto t = grow_classification_tree(x, y, counts, {1.0, 1.0}, p, tree_rng, importance);
  CHECK(t.depth() <= 2);
  p.max_depth = 0;
  p.min_samples_split = 1000;
  const auto stump = grow_classification_tree(x, y, counts, {1.0, 1.0}, p, tree_rng, importance);
  CHECK(stump.split_count() == 0);
  CHECK(stump.nodes()[0].value == doctest::Approx(0.5));
  CHECK(parse_criterion("gini") == SplitCriterion::Gini);
  CHECK_ERROR_CODE(parse_criterion("mse"), ErrorCode::Config);
  CHECK_ERROR_CODE(DecisionTree({TreeNode{0, 0.5, 5, 6, 0.0}}).validate(1), ErrorCode::Format);
}

// ---------------------------------------------------------------- boosting

TEST_CASE("boosting on separable data: training log-loss never rises") {
  const FeatureMatrix x(4, 1, {0, 0, 1, 1});
  const std::vector<int> y{0, 0, 1, 1};
  BoostedParams p;
  p.n_estimators = 200;
  p.colsample_bytree = p.colsample_bylevel = 1.0;
  const auto m = train_boosted(x, y, p);
  REQUIRE(m.training_loss.size() == m.trees().size() + 1);
  CHECK(m.trees().size() == 200);
  for (std::size_t i = 1; i < m.training_loss.size(); ++i) {
    REQUIRE(m.training_loss[i] <= m.training_loss[i - 1]);
  }
  CHECK(m.training_loss.back() < 0.05);
  CHECK(train_accuracy(Model(m), x, y) == 1.0);
}

TEST_CASE("property: boosted log-loss is non-increasing on noisy data") {
  Rng rng(47);
  for (int trial = 0; trial < 6; ++trial) {
    const auto y = gen::labels(rng, 40);
    if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), 0) == 0) continue;
    const auto x = gen::clusters(rng, y, 10, 2, 0.3);
    BoostedParams p;
    p.n_estimators = 80;
    p.max_depth = 4;
    p.random_state = static_cast<std::uint64_t>(trial);
    const auto m = train_boosted(x, y, p);
    CHECK(m.trees().size() <= p.n_estimators);
    for (std::size_t i = 1; i < m.training_loss.size(); ++i) {
      REQUIRE(m.training_loss[i] <= m.training_loss[i - 1] + 1e-12);
    }
  }
}

TEST_CASE("boosting: base score is the prior log-odds and a huge lambda pins predictions to it") {
  Rng rng(48);
  std::vector<int> y(40, 0);
  for (std::size_t i = 0; i < 10; ++i) y[i] = 1;
  const auto x = gen::clusters(rng, y, 5, 2, 1.0);
  BoostedParams p;
  p.n_estimators = 50;
  p.reg_lambda = 1e12;
  const auto m = train_boosted(x, y, p);
  CHECK(m.base_score() == doctest::Approx(std::log(10.0 / 30.0)));
  const double base = 1.0 / (1.0 + std::exp(-m.base_score()));
  for (std::size_t r = 0; r < x.rows(); ++r) CHECK(m.score(x.row(r)) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("boosting determinism, importance and margin") {
  Rng rng(49);
  const auto y = gen::balanced_labels(20);
  const auto x = gen::clusters(rng, y, 12, 3, 0.5);
  BoostedParams p;
  p.n_estimators = 60;
  p.random_state = 3;
  const auto a = train_boosted(x, y, p);
  CHECK(train_boosted(x, y, p) == a);
  const auto& imp = feature_importance(a);
  CHECK(std::accumulate(imp.begin(), imp.end(), 0.0) == doctest::Approx(1.0));
  for (double v : imp) CHECK(v >= 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double z = a.base_score();
    for (const auto& t : a.trees()) z += a.learning_rate() * t.predict(x.row(r));
    CHECK(a.margin(x.row(r)) == doctest::Approx(z));
    const double s = a.score(x.row(r));
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
}

TEST_CASE("boosting keeps going past a round whose sampled columns are all constant") {
  // One informative column among 30 constant ones: most column samples miss it.
  std::vector<int> y = gen::balanced_labels(10);
  FeatureMatrix x(y.size(), 31);
  for (std::size_t r = 0; r < y.size(); ++r) {
    for (std::size_t c = 0; c < 31; ++c) x(r, c) = 1.0;
    x(r, 17) = y[r];
  }
  BoostedParams p;
  p.n_estimators = 100;
  const auto m = train_boosted(x, y, p);
  CHECK(m.trees().size() == 100);
  CHECK(train_accuracy(Model(m), x, y) == 1.0);
  CHECK(feature_importance(m)[17] == doctest::Approx(1.0));
}

// ---------------------------------------------------------------- selection

TEST_CASE("select_features examples") {
  const std::vector<double> imp{0.5, 0.3, 0.2};
  CHECK(select_features(imp, 0.0).indices == std::vector<std::size_t>{0, 1, 2});
  CHECK(select_features(imp, 0.25).indices == std::vector<std::size_t>{0, 1});
  CHECK(select_features(imp, 0.5).indices == std::vector<std::size_t>{0});
  CHECK_ERROR_CODE(select_features(imp, 0.51), ErrorCode::EmptySelection);
  CHECK_ERROR_CODE(select_features(imp, -0.1), ErrorCode::Config);
}

TEST_CASE("property: |S_tau| is non-increasing in tau and selection is idempotent") {
  Rng rng(50);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> imp(1 + uniform_below(rng, 40));
    for (auto& v : imp) v = uniform_unit(rng);
    normalize_importance(imp);
    const double top = *std::max_element(imp.begin(), imp.end());
    std::size_t previous = imp.size() + 1;
    for (int step = 0; step <= 20; ++step) {
      const double tau = step == 20 ? top : top * step / 20.0;
      const auto s = select_features(imp, tau);
      REQUIRE(s.indices.size() <= previous);
      previous = s.indices.size();
      std::vector<double> kept;
      for (auto j : s.indices) kept.push_back(imp[j]);
      REQUIRE(select_features(kept, tau).indices.size() == kept.size());
    }
  }
}

TEST_CASE("tau sweep and its tie-breaking") {
  const std::vector<SweepPoint> sweep{{0.0, 10, 0.8}, {0.01, 6, 0.9}, {0.02, 4, 0.9}, {0.03, 4, 0.9},
                                      {0.04, 1, 0.7}};
  const auto best = best_sweep_point(sweep);
  CHECK(best.tau == 0.03);
  CHECK(best.selected == 4);
  CHECK_ERROR_CODE(best_sweep_point(std::vector<SweepPoint>{}), ErrorCode::EmptySelection);

  const FeatureMatrix x(4, 3, {0, 1, 2, 1, 1, 2, 2, 1, 2, 3, 1, 2});
  const std::vector<int> y{0, 0, 1, 1};
  const std::vector<double> imp{0.6, 0.3, 0.1};
  const std::vector<double> taus{0.0, 0.2, 0.5, 0.9};
  std::vector<std::size_t> widths;
  const auto points = sweep_tau(x, y, x, y, imp, taus,
                                [&](const FeatureMatrix& a, std::span<const int>, const FeatureMatrix& b,
                                    std::span<const int>) {
                                  widths.push_back(a.cols());
                                  CHECK(a.cols() == b.cols());
                                  return 1.0 / static_cast<double>(a.cols());
                                });
  REQUIRE(points.size() == 3);  // tau 0.9 selects nothing and is skipped
  CHECK(widths == std::vector<std::size_t>{3, 2, 1});
  CHECK(best_sweep_point(points).tau == 0.5);
  CHECK(default_tau_grid().front() == 0.0);
}

// ---------------------------------------------------------------- PCA

TEST_CASE("PCA of three collinear points") {
  const FeatureMatrix x(3, 2, {0, 0, 1, 1, 2, 2});
  const auto r = pca_project(x, 1);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(r.components[0][0] == doctest::Approx(h).epsilon(1e-9));
  CHECK(r.components[0][1] == doctest::Approx(h).epsilon(1e-9));
  CHECK(r.explained_ratio[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.projected(0, 0) == doctest::Approx(-std::sqrt(2.0)));
  CHECK(r.projected(2, 0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("PCA of data on a 2D line: ratios 1 and 0") {
  Rng rng(51);
  FeatureMatrix x(20, 2);
  for (std::size_t r = 0; r < 20; ++r) {
    const double t = uniform_unit(rng) * 10.0;
    x(r, 0) = 3.0 * t + 1.0;
    x(r, 1) = -2.0 * t + 4.0;
  }
  const auto r = pca_project(x, 1);
  CHECK(std::abs(r.explained_ratio[0] - 1.0) <= 1e-9);
}

TEST_CASE("PCA errors") {
  CHECK_ERROR_CODE(pca_project(FeatureMatrix(3, 2, {1, 2, 1, 2, 1, 2}), 1), ErrorCode::DegenerateCovariance);
  CHECK_ERROR_CODE(pca_project(FeatureMatrix(1, 2, {1, 2}), 1), ErrorCode::InsufficientData);
  CHECK_ERROR_CODE(pca_project(FeatureMatrix(3, 2, {1, 2, 3, 4, 5, 7}), 3), ErrorCode::OutOfRange);
}

TEST_CASE("property: PCA agrees with a Jacobi eigen-decomposition") {
  Rng rng(52);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 6 + uniform_below(rng, 20), d = 2 + uniform_below(rng, 5);
    FeatureMatrix x(n, d);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < d; ++c) x(r, c) = (1.0 + static_cast<double>(c)) * uniform_unit(rng);
    const auto eig = jacobi(covariance(x));
    const double total = std::accumulate(eig.values.begin(), eig.values.end(), 0.0);
    const std::size_t k = std::min<std::size_t>(2, d);
    const auto r = pca_project(x, k);
    for (std::size_t c = 0; c < k; ++c) {
      CHECK(r.explained_ratio[c] == doctest::Approx(eig.values[c] / total).epsilon(1e-6));
      // Sign convention: the largest-magnitude entry is positive.
      auto ref = eig.vectors[c];
      const auto big = std::max_element(ref.begin(), ref.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
      });
      if (*big < 0) for (double& v : ref) v = -v;
      for (std::size_t j = 0; j < d; ++j) CHECK(r.components[c][j] == doctest::Approx(ref[j]).epsilon(1e-5));
    }
    for (std::size_t c = 1; c < k; ++c) CHECK(r.explained_ratio[c] <= r.explained_ratio[c - 1]);
    CHECK(r.explained_ratio[0] <= 1.0);
  }
}

TEST_CASE("property: full-rank projection preserves pairwise distances") {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + uniform_below(rng, 3), n = d + 3;
    FeatureMatrix x(n, d);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < d; ++c) x(r, c) = uniform_unit(rng) * 5.0;
    const auto p = pca_project(x, d);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
          d0 += (x(a, c) - x(b, c)) * (x(a, c) - x(b, c));
          d1 += (p.projected(a, c) - p.projected(b, c)) * (p.projected(a, c) - p.projected(b, c));
        }
        CHECK(std::sqrt(d1) == doctest::Approx(std::sqrt(d0)).epsilon(1e-7));
      }
    }
  }
}

// ---------------------------------------------------------------- persistence

TEST_CASE("model files round-trip to bit-identical predictions") {
  Rng rng(54);
  const auto y = gen::balanced_labels(20);
  const auto x = gen::clusters(rng, y, 7, 3, 0.4);
  BoostedParams bp;
  bp.n_estimators = 30;
  const Model models[] = {Model(train_forest(x, y, small_forest(20))), Model(train_boosted(x, y, bp))};
  for (const auto& m : models) {
    const auto bytes = serialize_model(m);
    CHECK(std::memcmp(bytes.data(), "CBT1", 4) == 0);
    const auto back = deserialize_model(bytes);
    CHECK(back.index() == m.index());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const double s0 = model_score(m, x.row(r)), s1 = model_score(back, x.row(r));
      REQUIRE(std::memcmp(&s0, &s1, sizeof s0) == 0);
    }
    CHECK(serialize_model(back) == bytes);

    auto cut = bytes;
    cut.resize(bytes.size() - 5);
    CHECK_ERROR_CODE(deserialize_model(cut), ErrorCode::Truncation);
    auto longer = bytes;
    longer.push_back(std::byte{0});
    CHECK_ERROR_CODE(deserialize_model(longer), ErrorCode::Format);
    auto bad = bytes;
    bad[0] = std::byte{'X'};
    CHECK_ERROR_CODE(deserialize_model(bad), ErrorCode::Format);
    auto kind = bytes;
    kind[12] = std::byte{9};
    CHECK_ERROR_CODE(deserialize_model(kind), ErrorCode::Format);
  }
}

TEST_CASE("hyperparameter files") {
  std::istringstream in(
      "# defaults for the forest, overrides for boosting\n"
      "n_estimators = 12\n"
      "forest.criterion=gini\n"
      "boosted.learning_rate=0.3\n"
      "max_depth=7\n"
      "forest.max_features=all\n"
      "eval_metric=mlogloss\n"
      "random_state=5\n");
  const auto c = parse_learn_config(in);
  CHECK(c.forest.n_estimators == 12);
  CHECK(c.boosted.n_estimators == 12);
  CHECK(c.forest.tree.criterion == SplitCriterion::Gini);
  CHECK(c.boosted.learning_rate == 0.3);
  CHECK(c.forest.tree.max_depth == 7);
  CHECK(c.boosted.max_depth == 7);
  CHECK_FALSE(c.forest.sqrt_features);
  CHECK(c.forest.random_state == 5);
  CHECK(c.boosted.random_state == 5);

  std::ostringstream out;
  write_learn_config(out, c);
  std::istringstream again(out.str());
  const auto d = parse_learn_config(again);
  CHECK(d.forest.n_estimators == c.forest.n_estimators);
  CHECK(d.forest.tree.criterion == c.forest.tree.criterion);
  CHECK(d.forest.sqrt_features == c.forest.sqrt_features);
  CHECK(d.boosted.learning_rate == c.boosted.learning_rate);
  CHECK(d.boosted.colsample_bylevel == c.boosted.colsample_bylevel);

  std::istringstream unknown("forest.learning_rate=0.1\n");
  CHECK_ERROR_CODE(parse_learn_config(unknown), ErrorCode::Config);
  std::istringstream typo("n_estimatorz=3\n");
  CHECK_ERROR_CODE(parse_learn_config(typo), ErrorCode::Config);
  std::istringstream junk("just words\n");
  CHECK_ERROR_CODE(parse_learn_config(junk), ErrorCode::Config);
}

TEST_CASE("default hyperparameters") {
  const ForestParams f;
  CHECK(f.n_estimators == 300);
  CHECK(f.tree.criterion == SplitCriterion::Entropy);
  CHECK(f.tree.min_samples_split == 10);
  CHECK(f.random_state == 0);
  const BoostedParams b;
  CHECK(b.n_estimators == 1000);
  CHECK(b.max_depth == 25);
  CHECK(b.learning_rate == 0.1);
  CHECK(b.colsample_bytree == 0.4);
  CHECK(b.colsample_bylevel == 0.4);
  CHECK(b.random_state == 0);
}
