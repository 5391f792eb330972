#include <benchmark/benchmark.h>

#include <random>

#include "fbmc/modem.hpp"
#include "fbmc/ofdm.hpp"
#include "fbmc/pilots.hpp"
#include "fbmc/prototype_filter.hpp"

namespace {

fbmc::OqamGrid random_grid(int m, int n, std::uint64_t seed) {
    fbmc::OqamGrid grid(m, n, 0.5);
    std::mt19937_64 rng(seed);
    for (auto& v : grid.values) v = (rng() & 1ULL) ? 0.7071 : -0.7071;
    return grid;
}

void BM_ModulateFast(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const fbmc::FbmcModem modem(fbmc::design_prototype_filter(m, 4));
    const auto grid = random_grid(m, 28, 1);
    for (auto _ : state) benchmark::DoNotOptimize(modem.modulate(grid));
    state.SetItemsProcessed(state.iterations() * grid.values.size());
}
BENCHMARK(BM_ModulateFast)->Arg(64)->Arg(256)->Arg(1024);

void BM_ModulateReference(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const fbmc::FbmcModem modem(fbmc::design_prototype_filter(m, 4));
    const auto grid = random_grid(m, 8, 1);
    for (auto _ : state) benchmark::DoNotOptimize(modem.modulate_ref(grid));
    state.SetItemsProcessed(state.iterations() * grid.values.size());
}
BENCHMARK(BM_ModulateReference)->Arg(64);

void BM_Demodulate(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const fbmc::FbmcModem modem(fbmc::design_prototype_filter(m, 4));
    const auto grid = random_grid(m, 28, 1);
    const auto stream = modem.modulate(grid);
    for (auto _ : state) benchmark::DoNotOptimize(modem.demodulate(stream, 28));
    state.SetItemsProcessed(state.iterations() * grid.values.size());
}
BENCHMARK(BM_Demodulate)->Arg(64)->Arg(256)->Arg(1024);

void BM_SolvePilotsExact(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const fbmc::FbmcModem modem(fbmc::design_prototype_filter(m, 4));
    const double beta = fbmc::ambiguity(modem.filter(), modem.convention(), 0, 1, 0).imag();
    const fbmc::CleanPilotTarget t{0.5, 0.5, 0.25};
    for (auto _ : state) {
        state.PauseTiming();
        auto grid = random_grid(m, 28, 3);
        std::vector<fbmc::PilotGroup> groups;
        for (int sub = 0; sub < m; sub += 6)
            for (int n0 : {8, 22})
                groups.push_back(fbmc::make_ddp4_group(sub, n0, t, t, beta));
        state.ResumeTiming();
        fbmc::solve_pilots_exact(grid, groups, modem, 2);
        benchmark::DoNotOptimize(grid.values.data());
    }
}
BENCHMARK(BM_SolvePilotsExact)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_OfdmModulate(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    fbmc::QamGrid grid(m, 14);
    std::mt19937_64 rng(5);
    for (auto& v : grid.values)
        v = fbmc::cplx((rng() & 1ULL) ? 0.7071 : -0.7071,
                       (rng() & 2ULL) ? 0.7071 : -0.7071);
    for (auto _ : state) benchmark::DoNotOptimize(fbmc::ofdm_modulate(grid, 20));
    state.SetItemsProcessed(state.iterations() * grid.values.size());
}
BENCHMARK(BM_OfdmModulate)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
