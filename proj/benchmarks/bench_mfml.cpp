#include "mfml/eval.hpp"
#include "mfml/kernels.hpp"
#include "mfml/kfda.hpp"
#include "mfml/log.hpp"
#include "mfml/metric.hpp"
#include "mfml/synth.hpp"

#include <benchmark/benchmark.h>

namespace {

mfml::Dataset data(int identities, int dim) {
  mfml::SynthParams p;
  p.identities = identities;
  p.dim = dim;
  return mfml::synthesize(p);
}

void BM_RbfGram(benchmark::State& state) {
  const auto ds = data(static_cast<int>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(mfml::self_gram(mfml::KernelSpec::rbf(5.0), ds.features));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RbfGram)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_ScatterAndSolve(benchmark::State& state) {
  const auto ds = data(static_cast<int>(state.range(0)), 32);
  const auto rows = mfml::all_indices(ds);
  const auto k = mfml::gram(mfml::KernelSpec::rbf(5.0), ds, rows, rows);
  const auto classes = mfml::index_classes(ds, rows);
  for (auto _ : state) {
    const auto scatter = mfml::build_scatter(k, classes);
    benchmark::DoNotOptimize(mfml::solve_kfda(scatter, classes.num_classes() - 1, mfml::kDefaultRegularizer));
  }
}
BENCHMARK(BM_ScatterAndSolve)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

void BM_ProbeGalleryScores(benchmark::State& state) {
  const auto ds = data(256, 32);
  const auto rows = mfml::all_indices(ds);
  const auto model = mfml::train_on_rows(ds, rows, mfml::KernelCombination::single(mfml::KernelSpec::rbf(5.0)));
  const auto probes = ds.features.topRows(state.range(0));
  for (auto _ : state) {
    const auto e = mfml::embed_rows(model, probes);
    benchmark::DoNotOptimize(mfml::squared_distances(e, e));
  }
}
BENCHMARK(BM_ProbeGalleryScores)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

// 1: kfda, 2: np-mfml with the default 20-kernel bank.
void BM_MethodTrials(benchmark::State& state) {
  mfml::set_warning_sink([](std::string_view) {});
  const auto ds = data(40, 20);
  mfml::EvalConfig config;
  config.method = static_cast<mfml::Method>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mfml::run_trials(ds, config));
}
BENCHMARK(BM_MethodTrials)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
