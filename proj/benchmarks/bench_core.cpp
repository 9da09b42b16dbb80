#include "divrisk/audit.hpp"
#include "divrisk/dsl.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace divrisk;

ExactDist bench_dist(int atoms) {
    std::vector<ExactDist::Atom> a;
    for (int i = 0; i < atoms; ++i) a.push_back({Rat(2 * i - atoms, 3), Rat(i + 1)});
    return ExactDist::from_atoms(std::move(a));
}

void BM_AntimonotonicStep(benchmark::State& state) {
    ExactDist d = bench_dist(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto out = symmetrization_step(d, CouplingMode::Antimonotonic);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_AntimonotonicStep)->Arg(6)->Arg(12);

void BM_IndependentStep(benchmark::State& state) {
    ExactDist d = bench_dist(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto out = symmetrization_step(d, CouplingMode::Independent);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_IndependentStep)->Arg(6)->Arg(12);

void BM_ComonotonicCoupling(benchmark::State& state) {
    ExactDist a = bench_dist(8), b = bench_dist(11);
    for (auto _ : state) {
        auto j = comonotonic_pair(a, b);
        benchmark::DoNotOptimize(j);
    }
}
BENCHMARK(BM_ComonotonicCoupling);

void BM_MartingaleCoupling(benchmark::State& state) {
    ExactDist x = bench_dist(4);
    ExactDist y = mean_preserving_spread(x, 0, Rat(1, 2), Rat(1, 2));
    y = mean_preserving_spread(y, 2, Rat(1, 4), Rat(1, 2));
    for (auto _ : state) {
        auto m = martingale_coupling(x, y);
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(BM_MartingaleCoupling);

void BM_DualEvaluate(benchmark::State& state) {
    auto f = parse_functional("dual(poly(0, 2))");
    ExactDist d = bench_dist(12);
    for (auto _ : state) {
        auto v = evaluate(f, d);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_DualEvaluate);

void BM_DiversificationAudit(benchmark::State& state) {
    const auto& entry = catalog_entry("WeirdVar");
    AuditConfig cfg;
    cfg.pair_budget = 8;
    for (auto _ : state) {
        auto rep = check_diversification<Rat>(entry.preference, entry.dsl,
                                              PairClass::AmAndId, cfg);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_DiversificationAudit);

}  // namespace

BENCHMARK_MAIN();
