#include "monolab/fitzpatrick.hpp"

#include <benchmark/benchmark.h>

using namespace monolab;

namespace {

SampledGraph identity_graph(int d, int samples) {
  SampledGraph g(d);
  for (int i = 0; i < samples; ++i) {
    const Vector x = Vector::Constant(d, -1.0 + 2.0 * i / (samples - 1));
    g.add(DualPair(x, x));
  }
  return g;
}

void BM_ConjugateField1D(benchmark::State& state) {
  const double step = 2.0 / static_cast<double>(state.range(0));
  const GridSpec grid = GridSpec::symmetric(1, 1.0, step);
  const ScalarField f = fitzpatrick_field(identity_graph(1, 21), grid);
  for (auto _ : state) benchmark::DoNotOptimize(conjugate_field(f).values.data());
  state.counters["nodes"] = static_cast<double>(grid.node_count());
}
BENCHMARK(BM_ConjugateField1D)->Arg(20)->Arg(80)->Arg(320);

void BM_ConjugateField2D(benchmark::State& state) {
  const double step = 2.0 / static_cast<double>(state.range(0));
  const GridSpec grid = GridSpec::symmetric(2, 1.0, step);
  const ScalarField f = fitzpatrick_field(identity_graph(2, 9), grid);
  for (auto _ : state) benchmark::DoNotOptimize(conjugate_field(f).values.data());
  state.counters["nodes"] = static_cast<double>(grid.node_count());
}
BENCHMARK(BM_ConjugateField2D)->Arg(4)->Arg(8)->Arg(16);

void BM_Classify(benchmark::State& state) {
  const GridSpec grid = GridSpec::symmetric(1, 1.0, 0.05);
  const SampledGraph g = identity_graph(1, 41);
  for (auto _ : state) benchmark::DoNotOptimize(classify(g, grid).is_maximal);
}
BENCHMARK(BM_Classify);

}  // namespace
