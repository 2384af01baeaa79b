#include "ogplab/gray_scan.hpp"
#include "ogplab/hypergraph.hpp"
#include "ogplab/instance.hpp"
#include "ogplab/overlap.hpp"
#include "ogplab/qaoa.hpp"
#include "ogplab/solve.hpp"

#include <benchmark/benchmark.h>

using namespace ogplab;

namespace {

XorsatInstance regular_instance(std::size_t n, std::size_t d) {
    return random_couplings(gen_regular(n, d, 3, 1), 2);
}

void BM_XorsatGrayScan(benchmark::State& state) {
    const auto inst = regular_instance(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        std::size_t best = 0;
        for_each_xorsat_cost(inst, [&](std::uint64_t, std::size_t cost) { best = std::max(best, cost); });
        benchmark::DoNotOptimize(best);
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}
BENCHMARK(BM_XorsatGrayScan)->DenseRange(18, 24, 3)->Unit(benchmark::kMillisecond);

void BM_DenseGrayScan(benchmark::State& state) {
    const auto inst = DenseSpinInstance::sk(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        double best = -1e300;
        for_each_dense_cost(inst, [&](std::uint64_t, double e) { best = std::max(best, e); });
        benchmark::DoNotOptimize(best);
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}
BENCHMARK(BM_DenseGrayScan)->DenseRange(16, 20, 4)->Unit(benchmark::kMillisecond);

void BM_EnumerateScan(benchmark::State& state) {
    const auto inst = regular_instance(static_cast<std::size_t>(state.range(0)), 15);
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_near_optimal(inst, ThresholdSpec::ratio(0.95)).size());
    }
}
BENCHMARK(BM_EnumerateScan)->Arg(21)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_BranchAndBound(benchmark::State& state) {
    const auto inst = regular_instance(static_cast<std::size_t>(state.range(0)), 15);
    for (auto _ : state) {
        benchmark::DoNotOptimize(branch_and_bound(inst, ThresholdSpec::ratio(0.95)).size());
    }
}
BENCHMARK(BM_BranchAndBound)->Arg(21)->Arg(24)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_SkBranchAndBound(benchmark::State& state) {
    const auto inst = DenseSpinInstance::sk(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(branch_and_bound(inst, ThresholdSpec::ratio(0.95)).size());
    }
}
BENCHMARK(BM_SkBranchAndBound)->Arg(30)->Arg(45)->Unit(benchmark::kMillisecond);

void BM_PairwiseOverlaps(benchmark::State& state) {
    SolutionSet s;
    s.n = 30;
    Rng rng = make_rng(4);
    for (std::int64_t i = 0; i < state.range(0); ++i) {
        s.members.push_back({SpinConfig::from_bits(30, rng() & low_mask(30)), 0.0});
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(pairwise_overlaps(s).total());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1) / 2);
}
BENCHMARK(BM_PairwiseOverlaps)->Arg(1000)->Arg(4000);

void BM_QaoaExpectation(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto diag = qaoa::build_cost_diagonal(regular_instance(n, 5));
    const qaoa::Params prm{{0.3, 0.7}, {0.4, 0.2}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(qaoa::expectation(qaoa::state(diag, n, prm), diag));
    }
}
BENCHMARK(BM_QaoaExpectation)->Arg(12)->Arg(18)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
