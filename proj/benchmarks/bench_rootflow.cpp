#include <benchmark/benchmark.h>

#include "rootflow/dynamics.hpp"
#include "rootflow/experiment.hpp"
#include "rootflow/solver.hpp"

namespace {

using namespace rootflow;

void BM_BuildTables(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int m1 = static_cast<int>(state.range(1));
    for (auto _ : state) {
        CoefficientTables tables(n, m1);
        benchmark::DoNotOptimize(tables.alpha(n, 1));
    }
}
BENCHMARK(BM_BuildTables)->Args({3, 5})->Args({8, 17});

void BM_CoeffsFromRoots(benchmark::State& state) {
    RootState rs;
    rs.m1 = static_cast<int>(state.range(0));
    rs.x = {{3.19, 3.67}, {-47.46, -23.83}};
    for (auto _ : state) {
        auto y = coeffs_from_roots(rs);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_CoeffsFromRoots)->Arg(5)->Arg(17);

void BM_HSecond(benchmark::State& state) {
    const auto tables = CoefficientTables::get(3, 5);
    const CVec x = {{-0.06, -0.69}, {8.51, 40.06}, {-31.70, -13.50}};
    const CVec xd = {{3.94, -0.82}, {-52.50, 13.06}, {-10.87, -17.44}};
    RootState rs{x, xd, 5};
    const CVec y_full = coeffs_from_roots(rs);
    const std::span<const Complex> y(y_full.data(), 3);
    const CVec yd = coeff_derivs_from_roots(rs);
    const CVec f = {{1.0, 0.5}, {-0.3, 0.2}, {0.1, -0.7}};
    for (auto _ : state) {
        for (int n = 1; n <= 3; ++n)
            benchmark::DoNotOptimize(h_second(n, x, xd, y, yd, f, *tables));
    }
}
BENCHMARK(BM_HSecond);

void BM_RootsOf(benchmark::State& state) {
    const int deg = static_cast<int>(state.range(0));
    CVec coeffs(deg + 1);
    coeffs[0] = 1.0;
    for (int i = 1; i <= deg; ++i) coeffs[i] = Complex(0.3 * i, -0.1 * i);
    for (auto _ : state) {
        auto roots = roots_of(coeffs);
        benchmark::DoNotOptimize(roots.data());
    }
}
BENCHMARK(BM_RootsOf)->Arg(3)->Arg(8)->Arg(20);

void BM_AlgebraicSample(benchmark::State& state) {
    ExperimentConfig cfg = example_config("3.2.2");
    cfg.ivp.t_end = cfg.ivp.t0 + 0.1;
    cfg.ivp.sample_dt = 1e-3;
    for (auto _ : state) {
        auto traj = solve_algebraic(cfg.ivp, cfg.options);
        benchmark::DoNotOptimize(traj.states.back().data());
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_AlgebraicSample);

void BM_DirectSample(benchmark::State& state) {
    ExperimentConfig cfg = example_config("3.2.2");
    cfg.ivp.t_end = cfg.ivp.t0 + 0.1;
    cfg.ivp.sample_dt = 1e-3;
    for (auto _ : state) {
        auto traj = integrate_direct(cfg.ivp, cfg.options);
        benchmark::DoNotOptimize(traj.states.back().data());
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_DirectSample);

}  // namespace

BENCHMARK_MAIN();
