#include <benchmark/benchmark.h>

#include "latstab/composition.hpp"
#include "latstab/families.hpp"

namespace {

void BM_CasualComposePow(benchmark::State& state) {
  const auto rep = latstab::example1_representation(1.0, 0.5, 64);
  const auto g = rep.normalizer(static_cast<int>(state.range(0)));
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        latstab::casual_compose_pow(rep.base, g, static_cast<int>(state.range(0)), t));
    t += 1e-6;
  }
}
BENCHMARK(BM_CasualComposePow)->Arg(1)->Arg(16)->Arg(256);

void BM_AdaptiveSeries(benchmark::State& state) {
  const auto cf = latstab::two_sided_discrete_stable(1.0, 1.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(latstab::SplitLatticePGF::adaptive_series_from_cf(cf));
  }
}
BENCHMARK(BM_AdaptiveSeries)->Unit(benchmark::kMillisecond);

void BM_VerifyExample3(benchmark::State& state) {
  const auto rep = latstab::example3_representation(1.0, 0.5, 3.0, 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(latstab::verify_representation(rep, 1 << 10, 1e-12));
  }
}
BENCHMARK(BM_VerifyExample3)->Unit(benchmark::kMillisecond);

}  // namespace
