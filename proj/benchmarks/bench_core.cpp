#include <benchmark/benchmark.h>

#include "tarmc/density.hpp"
#include "tarmc/likelihood.hpp"
#include "tarmc/limit.hpp"
#include "tarmc/model.hpp"

namespace {

tarmc::TarParams reference_params() {
    tarmc::TarParams p;
    p.rho1 = 0.15;
    p.rho2 = 0.95;
    p.sigma = 1.0;
    p.theta = 2.0;
    p.alpha = 0.5;
    p.beta = 3.5;
    return p;
}

void BM_SimulateTar(benchmark::State& state) {
    const auto params = reference_params();
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto traj = tarmc::simulate_tar(params, n, seed++, 1000);
        benchmark::DoNotOptimize(traj.values.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(n));
}
BENCHMARK(BM_SimulateTar)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_BuildPiecewise(benchmark::State& state) {
    const auto params = reference_params();
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto traj = tarmc::simulate_tar(params, n, 11, 1000);
    for (auto _ : state) {
        auto pl = tarmc::build_piecewise(traj, params);
        benchmark::DoNotOptimize(pl.loglik.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(n));
}
BENCHMARK(BM_BuildPiecewise)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_EstimatorsFinite(benchmark::State& state) {
    const auto params = reference_params();
    const auto traj = tarmc::simulate_tar(params, 5000, 11, 1000);
    const auto pl = tarmc::build_piecewise(traj, params);
    const auto prior = tarmc::Prior::uniform();
    for (auto _ : state) {
        auto mle = tarmc::mle_finite(pl);
        double bayes = tarmc::bayes_finite(pl, prior);
        benchmark::DoNotOptimize(mle.theta_hat);
        benchmark::DoNotOptimize(bayes);
    }
}
BENCHMARK(BM_EstimatorsFinite);

void BM_LimitPathAndEstimate(benchmark::State& state) {
    tarmc::JumpParams jump{0.8, 2.0, 1.0};
    tarmc::Rng rng(5);
    for (auto _ : state) {
        auto path = tarmc::sample_limit_path(0.5, jump, rng);
        auto est = tarmc::estimate_limit(path);
        benchmark::DoNotOptimize(est.u_hat);
        benchmark::DoNotOptimize(est.u_tilde);
    }
}
BENCHMARK(BM_LimitPathAndEstimate);

void BM_DensityIteration(benchmark::State& state) {
    const auto params = reference_params();
    tarmc::GridSpec grid;
    grid.points = static_cast<std::size_t>(state.range(0));
    auto sol = tarmc::solve_density(params, grid, 1e-6, 10000);
    for (auto _ : state) {
        auto next = tarmc::apply_transfer_operator(params, sol.grid, sol.values);
        benchmark::DoNotOptimize(next.data());
    }
}
BENCHMARK(BM_DensityIteration)->Arg(801)->Arg(2001);

}  // namespace

BENCHMARK_MAIN();
