#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tarmc/errors.hpp"
#include "tarmc/harness.hpp"
#include "tarmc/rng.hpp"
#include "tarmc/stats.hpp"

using namespace tarmc;

namespace {

JumpParams reference_jump() { return JumpParams{0.8, 2.0, 1.0}; }

TarParams reference_params() {
    TarParams p;
    p.rho1 = 0.15;
    p.rho2 = 0.95;
    p.sigma = 1.0;
    p.theta = 2.0;
    p.alpha = 0.5;
    p.beta = 3.5;
    return p;
}

LimitTableConfig table_config(std::size_t reps, std::uint64_t seed) {
    LimitTableConfig cfg;
    cfg.lambda = 0.5;
    cfg.jump = reference_jump();
    cfg.reps = reps;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("statistics helpers compute hand values") {
    // Type-7 quantiles: h = (n - 1) p with linear interpolation.
    const std::vector<double> s{10.0, 20.0, 30.0};
    CHECK(quantile_type7(s, 0.5) == 20.0);
    CHECK(quantile_type7(s, 0.25) == 15.0);
    CHECK(quantile_type7(s, 0.75) == 25.0);
    const std::vector<double> s4{1.0, 2.0, 3.0, 4.0};
    CHECK(quantile_type7(s4, 0.5) == 2.5);

    // Kolmogorov-Smirnov with ties handled at the common jump points.
    CHECK(ks_distance({1.0, 2.0}, {1.0, 2.0}) == 0.0);
    CHECK(ks_distance({1.0}, {2.0}) == 1.0);
    CHECK(ks_distance({1.0, 1.0, 2.0}, {1.0, 2.0, 2.0}) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    // Moment summary with delta-method second-moment error.
    const auto m = summarize_moments({1.0, 2.0, 3.0});
    CHECK(m.count == 3);
    CHECK(m.mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(m.mean_se == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(m.second_moment == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
    CHECK(m.second_moment_se ==
          doctest::Approx(std::sqrt((98.0 / 3.0 - 196.0 / 9.0) / 3.0)).epsilon(1e-12));

    // Compensated summation recovers mass lost to cancellation.
    NeumaierSum acc;
    acc.add(1.0);
    acc.add(1e100);
    acc.add(1.0);
    acc.add(-1e100);
    CHECK(acc.value() == 2.0);
}

TEST_CASE("table probability levels match the critical-value layout") {
    const std::vector<double> expected{0.025, 0.05, 0.075, 0.1, 0.9, 0.925, 0.95, 0.975};
    CHECK(table_prob_levels() == expected);
}

TEST_CASE("parallel_replicates is order-invariant and propagates exceptions") {
    std::vector<double> a(40), b(40);
    parallel_replicates(40, 1, [&](std::size_t r) {
        a[r] = static_cast<double>(splitmix64(r));
    });
    parallel_replicates(40, 3, [&](std::size_t r) {
        b[r] = static_cast<double>(splitmix64(r));
    });
    CHECK(a == b);

    std::atomic<int> calls{0};
    try {
        parallel_replicates(10, 2, [&](std::size_t r) {
            ++calls;
            if (r == 5) throw numeric_error("replicate 5 failed");
        });
        FAIL("expected numeric_error");
    } catch (const numeric_error& e) {
        CHECK(std::string(e.what()).find("replicate 5") != std::string::npos);
    }
    CHECK(calls.load() >= 1);
}

TEST_CASE("seed derivation separates replicates and streams") {
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
    CHECK(derive_seed(1, 7, 2) == derive_seed(1, 7, 2));
    CHECK(derive_seed(1, 7, 2) != derive_seed(2, 7, 2));
}

TEST_CASE("limit table: report shape, invariance, and reproducibility") {
    const auto base = run_limit_table(table_config(2000, 7));
    CHECK(base.u_hat.size() == 2000);
    CHECK(base.u_tilde.size() == 2000);
    CHECK(base.failures == 0);
    REQUIRE(base.mle_quantiles.size() == 8);
    for (std::size_t i = 1; i < 8; ++i) {
        CHECK(base.mle_quantiles[i] >= base.mle_quantiles[i - 1]);
        CHECK(base.bayes_quantiles[i] >= base.bayes_quantiles[i - 1]);
    }

    // Bit-identical across worker counts.
    for (unsigned workers : {2u, 8u}) {
        auto cfg = table_config(2000, 7);
        cfg.workers = workers;
        const auto rep = run_limit_table(cfg);
        CHECK(rep.u_hat == base.u_hat);
        CHECK(rep.u_tilde == base.u_tilde);
        CHECK(rep.mle_quantiles == base.mle_quantiles);
        CHECK(rep.bayes_quantiles == base.bayes_quantiles);
    }

    // Halving the replicate count reproduces the exact sample prefix.
    const auto half = run_limit_table(table_config(1000, 7));
    for (std::size_t r = 0; r < 1000; ++r) {
        CHECK(half.u_hat[r] == base.u_hat[r]);
        CHECK(half.u_tilde[r] == base.u_tilde[r]);
    }
}

TEST_CASE("limit table: median of a symmetric run is near zero") {
    auto cfg = table_config(2000, 7);
    cfg.probs = {0.5};
    const auto rep = run_limit_table(cfg);
    REQUIRE(rep.mle_quantiles.size() == 1);
    // SE of a median is ~1.2533 sd/sqrt(n) for a smooth symmetric law.
    const double median_se = 1.2533 * rep.mle_moments.mean_se;
    CHECK(std::abs(rep.mle_quantiles[0]) < 3.0 * median_se);
}

TEST_CASE("limit table: posterior mean beats the midpoint on every seed") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto rep = run_limit_table(table_config(5000, seed));
        CHECK(rep.bayes_moments.second_moment < rep.mle_moments.second_moment);
    }
}

TEST_CASE("limit table: configuration validation") {
    CHECK_THROWS_AS(run_limit_table(table_config(999, 1)), config_error);

    auto bad_probs = table_config(1000, 1);
    bad_probs.probs = {0.5, 1.0};
    CHECK_THROWS_AS(run_limit_table(bad_probs), config_error);
    bad_probs.probs = {0.0};
    CHECK_THROWS_AS(run_limit_table(bad_probs), config_error);
    bad_probs.probs = {};
    CHECK_THROWS_AS(run_limit_table(bad_probs), config_error);

    auto bad_lambda = table_config(1000, 1);
    bad_lambda.lambda = 0.0;
    CHECK_THROWS_AS(run_limit_table(bad_lambda), config_error);
}

TEST_CASE("finite-sample convergence: light run is coherent") {
    ConvergenceConfig cfg;
    cfg.params = reference_params();
    cfg.n = 500;
    cfg.reps = 200;
    cfg.seed = 11;
    cfg.limit_reps = 2000;
    const auto rep = run_finite_convergence(cfg);

    CHECK(rep.lambda_solver == doctest::Approx(0.1289613).epsilon(2e-3));
    CHECK(rep.finite_mle.size() == 200);
    CHECK(rep.finite_bayes.size() == 200);
    CHECK(rep.limit_mle.size() == 2000);
    CHECK(rep.failures == 0);
    REQUIRE(rep.finite_mle_quantiles.size() == 8);
    for (std::size_t i = 1; i < 8; ++i)
        CHECK(rep.finite_mle_quantiles[i] >= rep.finite_mle_quantiles[i - 1]);
    CHECK(rep.ks_mle > 0.0);
    CHECK(rep.ks_mle < 0.5);
    CHECK(rep.ks_bayes > 0.0);
    CHECK(rep.ks_bayes < 0.5);
    CHECK(rep.config.n == 500);

    // Worker invariance holds for the combined solver + two-stream pipeline.
    ConvergenceConfig threaded = cfg;
    threaded.workers = 4;
    const auto rep4 = run_finite_convergence(threaded);
    CHECK(rep4.finite_mle == rep.finite_mle);
    CHECK(rep4.finite_bayes == rep.finite_bayes);
    CHECK(rep4.limit_mle == rep.limit_mle);
    CHECK(rep4.ks_mle == rep.ks_mle);
}

TEST_CASE("finite-sample convergence: preconditions") {
    ConvergenceConfig cfg;
    cfg.params = reference_params();
    cfg.n = 499;  // below the minimum
    cfg.reps = 100;
    cfg.seed = 1;
    CHECK_THROWS_AS(run_finite_convergence(cfg), config_error);

    ConvergenceConfig degenerate;
    degenerate.params = reference_params();
    degenerate.params.rho1 = degenerate.params.rho2 = 0.5;
    degenerate.n = 1000;
    degenerate.reps = 100;
    degenerate.seed = 1;
    CHECK_THROWS_AS(run_finite_convergence(degenerate), config_error);
}

TEST_CASE("weight sweep: symmetric convex curve with argmin at the center") {
    SweepConfig cfg;
    cfg.lambda = 0.5;
    cfg.jump = reference_jump();
    cfg.reps = 20000;
    cfg.seed = 64;
    for (int i = 0; i <= 10; ++i) cfg.weights.push_back(i / 10.0);
    const auto rep = gamma_weight_sweep(cfg);
    REQUIRE(rep.second_moment.size() == 11);
    CHECK(rep.failures == 0);

    std::size_t arg = 0;
    for (std::size_t i = 0; i < rep.second_moment.size(); ++i)
        if (rep.second_moment[i] < rep.second_moment[arg]) arg = i;
    CHECK(std::abs(cfg.weights[arg] - 0.5) <= 0.1 + 1e-12);

    // Coupled-path symmetry: curve values at w and 1-w agree within 3 SE.
    for (std::size_t i = 0; i <= 5; ++i) {
        const std::size_t j = 10 - i;
        CHECK(std::abs(rep.second_moment[i] - rep.second_moment[j]) <=
              3.0 * (rep.se[i] + rep.se[j]));
    }
    CHECK(std::abs(rep.second_moment[0] - rep.second_moment[10]) <=
          3.0 * (rep.se[0] + rep.se[10]));

    // Worker invariance on a smaller coupled run.
    SweepConfig small = cfg;
    small.reps = 2000;
    const auto a = gamma_weight_sweep(small);
    small.workers = 4;
    const auto b = gamma_weight_sweep(small);
    CHECK(a.second_moment == b.second_moment);
    CHECK(a.se == b.se);
}

TEST_CASE("weight sweep: validation") {
    SweepConfig cfg;
    cfg.lambda = 0.5;
    cfg.jump = reference_jump();
    cfg.reps = 100;
    cfg.seed = 1;

    cfg.weights = {0.0, 1.0};  // missing the center
    CHECK_THROWS_AS(gamma_weight_sweep(cfg), config_error);
    cfg.weights = {0.0, 0.5};  // missing an endpoint
    CHECK_THROWS_AS(gamma_weight_sweep(cfg), config_error);
    cfg.weights = {0.5, 1.0};
    CHECK_THROWS_AS(gamma_weight_sweep(cfg), config_error);
    cfg.weights = {0.0, 0.5, 1.0, 1.2};  // outside the unit interval
    CHECK_THROWS_AS(gamma_weight_sweep(cfg), config_error);
    cfg.weights = {};
    CHECK_THROWS_AS(gamma_weight_sweep(cfg), config_error);
    cfg.weights = {0.0, 0.5, 1.0};
    cfg.reps = 0;
    CHECK_THROWS_AS(gamma_weight_sweep(cfg), config_error);
}
