#include "monolab/convex.hpp"
#include "monolab/resolvent.hpp"
#include "monolab/varcalc.hpp"

#include <benchmark/benchmark.h>

using namespace monolab;

namespace {

Vector ones(int d) { return Vector::Ones(d); }

void BM_ResolventProx(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const OperatorSpec t = OperatorSpec::subdifferential(ConvexFn::abs_value_sum(d));
  const Vector w = 3.0 * ones(d);
  for (auto _ : state) benchmark::DoNotOptimize(resolvent(t, 0.5, w).solution);
}
BENCHMARK(BM_ResolventProx)->Arg(1)->Arg(8)->Arg(64);

// Newton path: set-valued summand plus a skew linear map.
void BM_ResolventNewtonSum(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const OperatorSpec t = OperatorSpec::sum(
      {OperatorSpec::subdifferential(ConvexFn::abs_value_sum(2 * k)), OperatorSpec::linear(scaled_rotation(k))});
  const Vector w = ones(2 * k);
  for (auto _ : state) benchmark::DoNotOptimize(resolvent(t, 1.0, w).solution);
}
BENCHMARK(BM_ResolventNewtonSum)->Arg(1)->Arg(4)->Arg(8);

void BM_ResolventYosidaSum(benchmark::State& state) {
  const OperatorSpec a = OperatorSpec::normal_cone(ConvexSet::singleton(Vector::Constant(1, -1.0)));
  const OperatorSpec b = OperatorSpec::normal_cone(ConvexSet::singleton(Vector::Constant(1, 1.0)));
  const OperatorSpec s = regularized_sum_spec(a, b, 1e-4, 1e-2);
  const Vector w = Vector::Zero(1);
  for (auto _ : state) benchmark::DoNotOptimize(resolvent(s, 1.0, w).solution);
}
BENCHMARK(BM_ResolventYosidaSum);

}  // namespace
