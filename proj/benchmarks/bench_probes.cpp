#include "monolab/limits.hpp"
#include "monolab/varcalc.hpp"

#include <benchmark/benchmark.h>

using namespace monolab;

namespace {

OperatorSpec cone_at(double p) { return OperatorSpec::normal_cone(ConvexSet::singleton(Vector::Constant(1, p))); }

void BM_LiminfAlternating(benchmark::State& state) {
  const auto seq = OperatorSequence::periodic({cone_at(0.0), OperatorSpec::zero(1)});
  const DualPair p(Vector::Zero(1), Vector::Zero(1));
  for (auto _ : state) benchmark::DoNotOptimize(liminf_member(seq, p, state.range(0)).status);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LiminfAlternating)->Arg(1'000)->Arg(10'000)->Arg(1'000'000);

void BM_VarsumDisjointCones(benchmark::State& state) {
  const DualPair p(Vector::Zero(1), Vector::Zero(1));
  const ProbeFamily fam = ProbeFamily::default_family();
  for (auto _ : state) {
    benchmark::DoNotOptimize(varsum_member(cone_at(-1.0), cone_at(1.0), p, fam, state.range(0)).aggregate.status);
  }
}
BENCHMARK(BM_VarsumDisjointCones)->Arg(1'000)->Arg(10'000);

}  // namespace
