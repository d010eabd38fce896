#include <benchmark/benchmark.h>

#include "sonine/specfun.hpp"

namespace sf = sonine::specfun;

static void BM_MittagLefflerSeries(benchmark::State& state) {
    double z = -0.5;
    for (auto _ : state) benchmark::DoNotOptimize(sf::mittag_leffler(0.5, 1.0, z));
}
BENCHMARK(BM_MittagLefflerSeries);

static void BM_MittagLefflerIntegral(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sf::mittag_leffler(0.3, 0.7, -5.0));
}
BENCHMARK(BM_MittagLefflerIntegral);

static void BM_MittagLefflerAsymptotic(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sf::mittag_leffler(0.5, 1.0, -1e3));
}
BENCHMARK(BM_MittagLefflerAsymptotic);

static void BM_BesselJ(benchmark::State& state) {
    const double y = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sf::bessel_j(0.4, y));
}
BENCHMARK(BM_BesselJ)->Arg(1)->Arg(50);

static void BM_ExpIntegral(benchmark::State& state) {
    const double t = static_cast<double>(state.range(0)) / 4.0;
    for (auto _ : state) benchmark::DoNotOptimize(sf::exp_integral_e1(t));
}
BENCHMARK(BM_ExpIntegral)->Arg(1)->Arg(40);

static void BM_Gamma(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sf::gamma(3.7));
}
BENCHMARK(BM_Gamma);

BENCHMARK_MAIN();
