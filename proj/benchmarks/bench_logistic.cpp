#include <benchmark/benchmark.h>

#include <cmath>

#include "membrana/logistic.hpp"

using namespace membrana;

namespace {

MembraneLogistic problem(const Geometry& g, double d) {
  MembraneLogistic p;
  p.d = d;
  p.beta1 = CoefField::sample(g, Side::One, [](double x) { return 0.5 - 2.0 * x; });
  p.beta2 = CoefField::constant(g, Side::Two, 1.0);
  p.alpha1 = CoefField::constant(g, Side::One, 1.0);
  p.alpha2 = CoefField::constant(g, Side::Two, 1.0);
  return p;
}

}  // namespace

static void BM_LogisticFromAbove(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, n, n));
  const auto p = problem(g, 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_logistic_membrane(p, g));
  }
}

BENCHMARK(BM_LogisticFromAbove)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMicrosecond);

static void BM_LogisticFromBelow(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, n, n));
  const auto p = problem(g, 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_logistic_membrane_from_below(p, g));
  }
}

BENCHMARK(BM_LogisticFromBelow)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

static void BM_LargeSolution(benchmark::State& state) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, 65, 5001));
  const auto a = CoefField::constant(g, Side::Two, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(approximate_large_solution(-1e4, a, 1.0, g, {1e8, 1e10, 1e12, 1e14}));
  }
}

BENCHMARK(BM_LargeSolution)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
