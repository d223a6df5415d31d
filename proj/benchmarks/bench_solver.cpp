#include <benchmark/benchmark.h>

#include "spsaik/optimizer.hpp"
#include "spsaik/pso.hpp"
#include "spsaik/scenarios.hpp"

using namespace spsaik;

static void BM_ForwardKinematics(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto chain = ChainModel::unit(n);
    const JointVector q = JointVector::LinSpaced(static_cast<Eigen::Index>(n), -30, 45);
    for (auto _ : state) benchmark::DoNotOptimize(forward_kinematics(chain, q));
}
BENCHMARK(BM_ForwardKinematics)->Arg(8)->Arg(20);

static void BM_CombinedLoss(benchmark::State& state) {
    const auto s = builtin(state.range(0) == 8 ? "1.5" : "2.3");
    for (auto _ : state) benchmark::DoNotOptimize(combined_loss(s.spec, s.chain, s.spec.reference));
}
BENCHMARK(BM_CombinedLoss)->Arg(8)->Arg(20);

static void BM_SolveIterations(benchmark::State& state) {
    const auto s = builtin("2.3");
    SolverParams p;
    p.n_max = static_cast<std::size_t>(state.range(0));
    RunOptions o;
    o.trace_every = p.n_max;
    for (auto _ : state) benchmark::DoNotOptimize(solve(s.spec, s.chain, p, o).final_loss);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SolveIterations)->Arg(1000)->Arg(25000)->Unit(benchmark::kMillisecond);

static void BM_PsoBudget(benchmark::State& state) {
    const auto s = builtin("2.3");
    PsoParams p;
    p.eval_budget = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pso_solve(s.spec, s.chain, p).final_loss);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PsoBudget)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
