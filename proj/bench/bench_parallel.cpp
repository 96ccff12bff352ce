#include <benchmark/benchmark.h>

#include "fblnoma/channel.hpp"
#include "fblnoma/experiments.hpp"
#include "fblnoma/oracle.hpp"

using namespace fblnoma;

namespace {

Execution exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void set_label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

const ChannelGains kGains(0.64, 0.01);

void BM_NomaPowerScan(benchmark::State& state) {
    const SystemParams params(Blocklength(200), 1e4, 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_noma(kGains, params, {}, {200, exec_of(state)}).objective);
    }
    set_label(state);
}

void BM_OmaSlotSearch(benchmark::State& state) {
    const SystemParams params(Blocklength(1000), 1e4, 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_oma(kGains, params, {}, {exec_of(state)}).t1_bar);
    }
    set_label(state);
}

void BM_MonteCarlo(benchmark::State& state) {
    ScenarioFading sc;
    sc.realizations = 64;
    const SystemParams params(Blocklength(200), db_to_linear(90.0), 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(monte_carlo_average(sc, params, Scheme::noma, {}, exec_of(state)).mean);
    }
    set_label(state);
}

void BM_GridOracle(benchmark::State& state) {
    const SystemParams params(Blocklength(200), 1e4, 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid_optimize_noma(kGains, params, GridSpec{80, 80, 80}, exec_of(state)).report.objective);
    }
    set_label(state);
}

void BM_Sweep(benchmark::State& state) {
    auto spec = preset("fig8");
    spec.points = 8;
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, exec_of(state)).size());
    set_label(state);
}

}  // namespace

BENCHMARK(BM_NomaPowerScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OmaSlotSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
