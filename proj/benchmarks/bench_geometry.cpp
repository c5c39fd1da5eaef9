#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "pseudoradial/geometry.hpp"

using namespace pseudoradial;

namespace {

/// Residual of u = w(theta) / sin r on the sphere, grid 32 x 64 refined range(0) times.
void BM_PdeResidualSphere(benchmark::State& state)
{
    const RadialProfile prof = radial_profile(Family::Spherical, 3, 0);
    const PseudoRadialSolution u = build_solution(prof, solve_mode(Params(-1, 3, 1), 2, ModeKind::SignChanging));
    const MetricSpec g = prof.metric();
    GridSpec grid{0.3, std::numbers::pi - 0.3, 32, 64};
    for (int i = 0; i < state.range(0); ++i) grid = refine(grid);
    for (auto _ : state) benchmark::DoNotOptimize(pde_residual(u, g, grid));
    state.counters["points"] = double(grid.n_r) * grid.n_theta;
}
BENCHMARK(BM_PdeResidualSphere)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_ConditionResidual(benchmark::State& state)
{
    const RadialProfile prof = radial_profile(Family::ConformalPower, 0.5, 6, {1, 1});
    const MetricSpec g = prof.metric();
    std::vector<double> r;
    for (int i = 0; i < 1000; ++i) r.push_back(0.5 + 1.5 * i / 999);
    for (auto _ : state) benchmark::DoNotOptimize(metric_condition_residual(g, 0.5, prof.mu, r));
}
BENCHMARK(BM_ConditionResidual);

}  // namespace
