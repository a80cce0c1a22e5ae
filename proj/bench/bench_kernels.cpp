// OpenMP kernels against their serial references. The worker count of the
// parallel variants follows VOXBETTI_WORKERS, or the OpenMP default.

#include <benchmark/benchmark.h>

#include "voxbetti/betti.hpp"
#include "voxbetti/cubical.hpp"
#include "voxbetti/learn.hpp"
#include "voxbetti/parallel.hpp"
#include "voxbetti/phantom.hpp"

using namespace voxbetti;

namespace {

Volume3D phantom(std::size_t side) {
  Rng rng(0);
  PhantomOptions opt;
  opt.dims = {side, side, side};
  return normalize(structured_blob(opt, rng));
}

std::vector<Volume3D> batch(std::size_t count, std::size_t side) {
  std::vector<Volume3D> out;
  for (auto& p : generate_phantoms(PhantomKind::TwoClassMix, count, 0, {{side, side, side}, 2.0})) {
    out.push_back(normalize(p.volume));
  }
  return out;
}

void BM_FiltrationSerial(benchmark::State& state) {
  const auto v = phantom(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_filtration_serial(v).cell_count());
}

void BM_FiltrationParallel(benchmark::State& state) {
  const auto v = phantom(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_filtration(v).cell_count());
  state.counters["workers"] = resolve_workers();
}

void BM_FeaturizeBatchSerial(benchmark::State& state) {
  const auto volumes = batch(8, static_cast<std::size_t>(state.range(0)));
  const auto grid = ThresholdGrid::uniform();
  for (auto _ : state) benchmark::DoNotOptimize(featurize_batch_serial(volumes, grid).size());
}

void BM_FeaturizeBatchParallel(benchmark::State& state) {
  const auto volumes = batch(8, static_cast<std::size_t>(state.range(0)));
  const auto grid = ThresholdGrid::uniform();
  for (auto _ : state) benchmark::DoNotOptimize(featurize_batch(volumes, grid).size());
  state.counters["workers"] = resolve_workers();
}

void BM_Forest(benchmark::State& state) {
  Rng rng(1);
  FeatureMatrix x(64, 300);
  std::vector<int> y(64);
  for (std::size_t r = 0; r < 64; ++r) {
    y[r] = static_cast<int>(r % 2);
    for (std::size_t c = 0; c < 300; ++c) x(r, c) = uniform_unit(rng) + (c < 20 ? 0.5 * y[r] : 0.0);
  }
  ForestParams p;
  p.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train_forest(x, y, p).trees().size());
  state.counters["workers"] = resolve_workers(p.workers);
}

}  // namespace

BENCHMARK(BM_FiltrationSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FiltrationParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FeaturizeBatchSerial)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FeaturizeBatchParallel)->Arg(24)->Unit(benchmark::kMillisecond);
// Arg 0 resolves through VOXBETTI_WORKERS / the OpenMP default.
BENCHMARK(BM_Forest)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
