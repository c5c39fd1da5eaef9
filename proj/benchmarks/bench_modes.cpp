#include <benchmark/benchmark.h>

#include "pseudoradial/modes.hpp"

using namespace pseudoradial;

namespace {

void BM_SolveSignChanging(benchmark::State& state)
{
    const Params p(-1, 3, 1);
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_mode(p, k, ModeKind::SignChanging));
}
BENCHMARK(BM_SolveSignChanging)->Arg(2)->Arg(8)->Arg(32);

void BM_SolvePositive(benchmark::State& state)
{
    const Params p(1, 0.5, 36);
    for (auto _ : state) benchmark::DoNotOptimize(solve_mode(p, 4, ModeKind::Positive));
}
BENCHMARK(BM_SolvePositive);

void BM_ClassifyCase(benchmark::State& state)
{
    const Params p(1, 0.5, 36);
    for (auto _ : state) benchmark::DoNotOptimize(classify_case(p));
}
BENCHMARK(BM_ClassifyCase);

}  // namespace
