// Serial reference kernels against the OpenMP kernels on the same sweeps.

#include <benchmark/benchmark.h>

#include "fxexp/analysis.hpp"

namespace {

void BM_Sweep(benchmark::State& state, bool serial)
{
    const int p = static_cast<int>(state.range(0));
    const fxexp::Sweeper sweeper(p, fxexp::SweepOptions{0, serial});
    const fxexp::ExpConfig cfg = fxexp::ExpConfig::uniform(p, p + 1, p + 1, fxexp::Arithmetic::ones_complement);
    for (auto _ : state)
        benchmark::DoNotOptimize(sweeper.sweep(cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sweeper.table().size()));
}

void BM_Derived(benchmark::State& state, bool serial)
{
    const int p = static_cast<int>(state.range(0));
    const fxexp::Sweeper sweeper(p, fxexp::SweepOptions{0, serial});
    const fxexp::ExpConfig cfg = fxexp::ExpConfig::uniform(p, p + 1, p + 1, fxexp::Arithmetic::ones_complement);
    fxexp::DerivedSpec spec;
    spec.function = fxexp::DerivedFunction::sigmoid;
    for (auto _ : state)
        benchmark::DoNotOptimize(sweeper.derived(spec, cfg));
}

void BM_CoeffScan(benchmark::State& state, bool serial)
{
    const int p = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(fxexp::coeff_error_scan(p, fxexp::SweepOptions{0, serial}));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Sweep, serial, true)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, parallel, false)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Derived, serial, true)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Derived, parallel, false)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CoeffScan, serial, true)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CoeffScan, parallel, false)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
