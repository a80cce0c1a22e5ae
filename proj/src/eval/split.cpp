#include <algorithm>
#include <cmath>
#include <numeric>

#include "voxbetti/error.hpp"
#include "voxbetti/eval.hpp"
#include "voxbetti/random.hpp"

namespace voxbetti {

namespace {

std::array<std::vector<std::size_t>, 2> members_by_class(std::span<const int> labels) {
  std::array<std::vector<std::size_t>, 2> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw Error(ErrorCode::InvalidData, "labels must be 0 or 1");
    members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  return members;
}

}  // namespace

TrainTestSplit split_80_20(std::span<const int> labels, std::uint64_t seed, double test_fraction) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::Config, "test fraction must lie in (0, 1)");
  }
  auto members = members_by_class(labels);
  Rng rng(seed);
  TrainTestSplit out;
  for (int c = 0; c < 2; ++c) {
    auto& m = members[static_cast<std::size_t>(c)];
    if (m.size() < kMinPerClass) {
      throw Error(ErrorCode::InsufficientData,
                  "class " + std::string(label_name(static_cast<Label>(c))) + " has " +
                      std::to_string(m.size()) + " samples; a split needs " +
                      std::to_string(kMinPerClass));
    }
    partial_shuffle(m, m.size(), rng);
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(m.size())));
    out.test.insert(out.test.end(), m.begin(), m.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), m.begin() + static_cast<std::ptrdiff_t>(n_test), m.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

TrainTestSplit split_80_20(const DatasetManifest& manifest, std::uint64_t seed) {
  std::vector<int> labels;
  labels.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) labels.push_back(static_cast<int>(e.label));
  return split_80_20(labels, seed);
}

std::vector<TrainTestSplit> stratified_k_fold(std::span<const int> labels, std::size_t k,
                                              std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::Config, "k-fold needs k >= 2");
  auto members = members_by_class(labels);
  for (const auto& m : members) {
    if (m.size() < k) {
      throw Error(ErrorCode::InsufficientData, "a class has fewer samples than folds");
    }
  }
  Rng rng(seed);
  std::vector<std::size_t> fold_of(labels.size());
  std::size_t dealt = 0;
  for (auto& m : members) {
    partial_shuffle(m, m.size(), rng);
    // Continue dealing where the previous class stopped so fold sizes stay level.
    for (auto i : m) fold_of[i] = dealt++ % k;
  }
  std::vector<TrainTestSplit> folds(k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) (f == fold_of[i] ? folds[f].test : folds[f].train).push_back(i);
  }
  return folds;
}

}  // namespace voxbetti
