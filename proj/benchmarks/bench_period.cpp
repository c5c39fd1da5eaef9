#include <benchmark/benchmark.h>

#include <cmath>

#include "pseudoradial/integrate.hpp"
#include "pseudoradial/period.hpp"

using namespace pseudoradial;

namespace {

/// Quadrature period at s = 10^(range(0) / 4 - 3) for a superlinear and a sublinear case.
void BM_PeriodOrigin(benchmark::State& state)
{
    const Params p(-1, state.range(1) ? 0.5 : 3, 4);
    const double s = std::pow(10.0, state.range(0) / 4.0 - 3);
    for (auto _ : state) benchmark::DoNotOptimize(period(p, Region::Origin, s));
}
BENCHMARK(BM_PeriodOrigin)->ArgsProduct({{0, 12, 20}, {0, 1}});

void BM_PeriodCenter(benchmark::State& state)
{
    const Params p(1, 0.5, 36);
    const double s = speed_range(p, Region::Center).hi * (1 - std::pow(10.0, -double(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(period(p, Region::Center, s));
}
BENCHMARK(BM_PeriodCenter)->Arg(1)->Arg(6)->Arg(10);

void BM_PeriodOracle(benchmark::State& state)
{
    const Params p(-1, 3, 1);
    for (auto _ : state) benchmark::DoNotOptimize(period_oracle(p, {0, 1}, 1e-12));
}
BENCHMARK(BM_PeriodOracle);

}  // namespace
