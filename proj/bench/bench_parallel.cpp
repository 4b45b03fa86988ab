// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "cvnoise/noise_engine.hpp"
#include "cvnoise/oracle.hpp"

namespace {

using namespace cvnoise;

Execution exec_of(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_RotationSweep(benchmark::State& state) {
    const auto params = params_for(Protocol::Dictionary, drw_params(db_to_alpha(5.0)));
    const auto thetas = rotation_grid(4096);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rotation_sweep(Protocol::Dictionary, 4, params, thetas, exec_of(state)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(thetas.size()));
}
BENCHMARK(BM_RotationSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BoundSuite(benchmark::State& state) {
    BoundOptions opt;
    opt.samples = 200;
    opt.drw = drw_params(db_to_alpha(5.0));
    opt.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(bound_suite(opt));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opt.samples));
}
BENCHMARK(BM_BoundSuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MonteCarloChannel(benchmark::State& state) {
    const auto plan = oracle::equivalence_plan(1, 42);
    const Mat2 input = Mat2::Identity() * 0.5;
    constexpr std::size_t samples = 20000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            oracle::run_channel(plan, input, oracle::Averaging::MonteCarlo, samples, 7, exec_of(state)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples));
}
BENCHMARK(BM_MonteCarloChannel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OracleEquivalence(benchmark::State& state) {
    oracle::EquivalenceOptions opt;
    opt.plans = 60;
    opt.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::oracle_equivalence(opt));
}
BENCHMARK(BM_OracleEquivalence)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
