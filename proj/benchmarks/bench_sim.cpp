#include <benchmark/benchmark.h>

#include "bandit/sim.hpp"

using namespace bandit;

namespace {

BanditInstance two_arm() {
    return BanditInstance({FiniteDist::bernoulli(0.7), FiniteDist::bernoulli(0.3)},
                          FiniteAlphabet({0.0, 1.0}));
}

void BM_EpisodeT1e3(benchmark::State& state) {
    const auto inst = two_arm();
    std::uint64_t seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_episode(inst, FiniteSupportSchedule{}, 1000, seed++));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_EpisodeT1e3)->Unit(benchmark::kMillisecond);

void BM_EpisodeT1e4(benchmark::State& state) {
    const auto inst = two_arm();
    std::uint64_t seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_episode(inst, FiniteSupportSchedule{}, 10000, seed++));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_EpisodeT1e4)->Unit(benchmark::kMillisecond);

void BM_ThreeArmEpisodeT1e4(benchmark::State& state) {
    const BanditInstance inst({FiniteDist::bernoulli(0.7), FiniteDist::bernoulli(0.5),
                               FiniteDist::bernoulli(0.3)},
                              FiniteAlphabet({0.0, 1.0}));
    std::uint64_t seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_episode(inst, FiniteSupportSchedule{}, 10000, seed++));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_ThreeArmEpisodeT1e4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
