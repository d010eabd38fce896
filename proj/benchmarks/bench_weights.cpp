#include <benchmark/benchmark.h>

#include "sonine/kernels.hpp"
#include "sonine/nonlin.hpp"
#include "sonine/tstep.hpp"

using namespace sonine;

static void BM_WeightsUniform(benchmark::State& state) {
    const auto pair = make_pair(SonineSpec::tempered(0.5, 1.0));
    const auto grid = TimeGrid::uniform(10.0, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ConvolutionWeights(pair, grid).row(grid.n_steps()));
}
BENCHMARK(BM_WeightsUniform)->Arg(1024)->Arg(4096);

static void BM_MajorantGraded(benchmark::State& state) {
    const auto pair = make_pair(SonineSpec::riemann_liouville(0.5));
    const auto grid = TimeGrid::graded(1.0, static_cast<int>(state.range(0)), 4.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_linear_majorant(1.0, pair, grid));
}
BENCHMARK(BM_MajorantGraded)->Arg(512)->Arg(2048);

static void BM_ScalarFisher(benchmark::State& state) {
    const auto pair = make_pair(SonineSpec::riemann_liouville(0.5));
    const auto grid = TimeGrid::uniform(1.0, static_cast<int>(state.range(0)));
    const auto f = NonlinearSource::fisher_kpp();
    for (auto _ : state) benchmark::DoNotOptimize(solve_scalar_nonlinear(pair, 9.8696, f, 4.0, grid, 1e6));
}
BENCHMARK(BM_ScalarFisher)->Arg(1024)->Arg(4096);

BENCHMARK_MAIN();
