#include <benchmark/benchmark.h>

#include "latstab/families.hpp"
#include "latstab/inversion.hpp"

namespace {

void BM_InvertPositiveStable(benchmark::State& state) {
  const auto cf = latstab::positive_discrete_stable(1.0, 0.5);
  const auto grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(latstab::invert_to_pmf(cf, grid));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InvertPositiveStable)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

void BM_InvertHermite(benchmark::State& state) {
  const auto cf = latstab::hermite(1.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(latstab::invert_to_pmf(cf, 1 << 12));
  }
}
BENCHMARK(BM_InvertHermite);

void BM_MinValidLambda(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(latstab::min_valid_lambda(1.0, 2.0, 1, 1e-6, 1 << 12));
  }
}
BENCHMARK(BM_MinValidLambda)->Unit(benchmark::kMillisecond);

}  // namespace
