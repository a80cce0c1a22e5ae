#include "voxbetti/betti.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "voxbetti/error.hpp"
#include "voxbetti/parallel.hpp"

namespace voxbetti {

ThresholdGrid::ThresholdGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::Config, "threshold grid needs at least one value");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw Error(ErrorCode::Config, "non-finite threshold");
    if (i > 0 && !(values_[i - 1] < values_[i])) {
      throw Error(ErrorCode::Config, "thresholds must be strictly increasing");
    }
  }
}

ThresholdGrid ThresholdGrid::uniform(std::size_t n, double lo, double hi) {
  if (n == 0) throw Error(ErrorCode::Config, "threshold count must be positive");
  if (n == 1) return ThresholdGrid({lo});
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  values.back() = hi;
  return ThresholdGrid(std::move(values));
}

std::vector<std::uint32_t> BettiFeatureVector::concatenated() const {
  std::vector<std::uint32_t> out;
  out.reserve(size());
  for (const auto& c : curves) out.insert(out.end(), c.begin(), c.end());
  return out;
}

std::vector<double> BettiFeatureVector::as_features() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& c : curves) {
    for (auto x : c) out.push_back(static_cast<double>(x));
  }
  return out;
}

std::vector<std::uint32_t> betti_curve(const PersistenceDiagram& d, const ThresholdGrid& g) {
  const auto t = g.values();
  // +1 at the first threshold >= birth, -1 at the first threshold >= death.
  std::vector<std::int64_t> delta(t.size() + 1, 0);
  for (const auto& p : d.pairs) {
    const auto begin = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), p.birth) - t.begin());
    const auto end = p.essential()
                         ? t.size()
                         : static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), p.death) - t.begin());
    if (begin >= end) continue;
    ++delta[begin];
    --delta[end];
  }
  std::vector<std::uint32_t> curve(t.size());
  std::int64_t running = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    running += delta[i];
    curve[i] = static_cast<std::uint32_t>(running);
  }
  return curve;
}

BettiFeatureVector featurize_diagrams(const DiagramSet& diagrams, const ThresholdGrid& g) {
  BettiFeatureVector v;
  for (int k = 0; k < 3; ++k) v.curves[static_cast<std::size_t>(k)] = betti_curve(diagrams[k], g);
  return v;
}

BettiFeatureVector featurize(const Volume3D& v, const ThresholdGrid& g) {
  const auto complex = build_filtration(v);
  return featurize_diagrams(compute_persistence(complex), g);
}

std::vector<BettiFeatureVector> featurize_batch(std::span<const Volume3D> volumes,
                                                const ThresholdGrid& g, int workers) {
  std::vector<BettiFeatureVector> out(volumes.size());
  parallel_for_index(volumes.size(), resolve_workers(workers),
                     [&](std::size_t i) { out[i] = featurize(volumes[i], g); });
  return out;
}

std::vector<BettiFeatureVector> featurize_batch_serial(std::span<const Volume3D> volumes,
                                                       const ThresholdGrid& g) {
  std::vector<BettiFeatureVector> out;
  out.reserve(volumes.size());
  for (const auto& v : volumes) out.push_back(featurize(v, g));
  return out;
}

double percentile(std::vector<double> sample, double q) {
  if (sample.empty()) throw Error(ErrorCode::InvalidData, "percentile of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double pos = q / 100.0 * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sample.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sample[lo] + (sample[hi] - sample[lo]) * frac;
}

CurveSummary summarize_curves(std::span<const BettiFeatureVector> vectors, double band) {
  if (!(band > 0.0 && band < 1.0)) throw Error(ErrorCode::Config, "band must lie in (0, 1)");
  CurveSummary summary;
  summary.band = band;
  const double q_lo = 50.0 - 50.0 * band;
  const double q_hi = 50.0 + 50.0 * band;
  for (Label label : {Label::LGG, Label::HGG}) {
    std::vector<const BettiFeatureVector*> members;
    for (const auto& v : vectors) {
      if (v.label == label) members.push_back(&v);
    }
    if (members.empty()) {
      throw Error(ErrorCode::MissingClass, "no vectors labelled " + std::string(label_name(label)));
    }
    const std::size_t n = members.front()->thresholds();
    auto& bands = summary.classes[label];
    for (std::size_t k = 0; k < 3; ++k) {
      CurveBand& b = bands[k];
      b.lower.resize(n);
      b.median.resize(n);
      b.upper.resize(n);
      std::vector<double> column(members.size());
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < members.size(); ++m) {
          if (members[m]->thresholds() != n) throw Error(ErrorCode::Shape, "mixed curve lengths");
          column[m] = members[m]->curves[k][i];
        }
        b.lower[i] = percentile(column, q_lo);
        b.median[i] = percentile(column, 50.0);
        b.upper[i] = percentile(column, q_hi);
      }
    }
  }
  return summary;
}

}  // namespace voxbetti
