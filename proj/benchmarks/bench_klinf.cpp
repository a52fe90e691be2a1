#include <benchmark/benchmark.h>

#include "bandit/klinf.hpp"
#include "bandit/klinf_oracle.hpp"
#include "bandit/policy.hpp"

using namespace bandit;

namespace {

const FiniteAlphabet kBinary({0.0, 1.0});
const FiniteAlphabet kFive({0.0, 0.2, 0.5, 0.8, 1.0});

void BM_KlinfBinaryClosedForm(benchmark::State& state) {
    const auto p = FiniteDist::bernoulli(0.3);
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(detail::klinf_dual(p.support(), p.weights(), x, 1.0).value);
        x = x == 0.5 ? 0.6 : 0.5;
    }
}
BENCHMARK(BM_KlinfBinaryClosedForm);

void BM_KlinfFivePointBisection(benchmark::State& state) {
    const FiniteDist p(kFive.points, {0.3, 0.25, 0.2, 0.15, 0.1});
    double x = 0.6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(detail::klinf_dual(p.support(), p.weights(), x, 1.0).value);
        x = x == 0.6 ? 0.7 : 0.6;
    }
}
BENCHMARK(BM_KlinfFivePointBisection);

void BM_IndexInversionBinary(benchmark::State& state) {
    EmpiricalDist e;
    for (int i = 0; i < 7; ++i) e.record(0.0);
    for (int i = 0; i < 3; ++i) e.record(1.0);
    const ModelClass cls = kBinary;
    double b = 0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(index(e, b, cls));
        b = b == 0.2 ? 0.25 : 0.2;
    }
}
BENCHMARK(BM_IndexInversionBinary);

void BM_OracleBinary(benchmark::State& state) {
    const auto p = FiniteDist::bernoulli(0.3);
    for (auto _ : state) benchmark::DoNotOptimize(klinf_oracle(p, 0.5, ModelClass(kBinary)));
}
BENCHMARK(BM_OracleBinary);

}  // namespace

BENCHMARK_MAIN();
