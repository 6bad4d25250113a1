#include <benchmark/benchmark.h>

#include <cmath>

#include "membrana/asymptotics.hpp"
#include "membrana/eigen.hpp"

using namespace membrana;

static void BM_Lambda1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = build_geometry(GeometrySpec::two_interval(1.0, 2.0, 3.0, n, n));
  const auto c1 = CoefField::sample(g, Side::One, [](double x) { return 1.0 + std::sin(3.0 * x); });
  const auto c2 = CoefField::sample(g, Side::Two, [](double x) { return 3.0 - std::cos(2.0 * x); });
  const double d = state.range(1) == 0 ? 1e-3 : 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambda1(d, c1, c2, 1.0, 2.0, g));
  }
}

BENCHMARK(BM_Lambda1)
    ->ArgsProduct({{257, 1025, 4097, 16385}, {0, 1}})
    ->Unit(benchmark::kMicrosecond);

static void BM_HCurveSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, n, n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_H({-10.0}, 1.0, 1.0, g));
  }
}

BENCHMARK(BM_HCurveSample)->Arg(129)->Arg(513)->Arg(2049)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
