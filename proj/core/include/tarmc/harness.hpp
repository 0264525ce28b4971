#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tarmc/density.hpp"
#include "tarmc/likelihood.hpp"
#include "tarmc/limit.hpp"
#include "tarmc/model.hpp"
#include "tarmc/stats.hpp"

namespace tarmc {

// Probability levels of the critical-value table (two.5%..10% in both tails).
const std::vector<double>& table_prob_levels();

// Runs `body(replicate)` for every replicate index on `workers` threads
// (0 = hardware concurrency).  Replicate r must derive all its randomness
// from derive_seed(master, r, stream), so results are bit-identical for any
// worker count; the first exception, if any, is rethrown on the caller.
void parallel_replicates(std::size_t reps, unsigned workers,
                         const std::function<void(std::size_t)>& body);

// ---------------------------------------------------------------------------
// Limit-law critical-value table
// ---------------------------------------------------------------------------

struct LimitTableConfig {
    double lambda = 0.0;
    JumpParams jump;
    double guard = 40.0;
    double weight = 0.5;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::vector<double> probs = table_prob_levels();
};

struct McReport {
    LimitTableConfig config;
    std::vector<double> u_hat;    // per replicate, in replicate order
    std::vector<double> u_tilde;  // (failed replicates recorded as NaN)
    std::vector<double> mle_quantiles;
    std::vector<double> bayes_quantiles;
    MomentSummary mle_moments;
    MomentSummary bayes_moments;
    std::size_t failures = 0;
};

McReport run_limit_table(const LimitTableConfig& config);

// ---------------------------------------------------------------------------
// Finite-sample convergence to the limit law
// ---------------------------------------------------------------------------

struct ConvergenceConfig {
    TarParams params;
    std::size_t n = 5000;
    std::size_t reps = 2000;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::size_t burn_in = 1000;
    std::size_t limit_reps = 20000;
    double guard = 40.0;
    double weight = 0.5;
    std::vector<double> probs = table_prob_levels();
    Prior prior = Prior::uniform();
    GridSpec density_grid;
};

struct ConvergenceReport {
    ConvergenceConfig config;
    double lambda_solver = 0.0;  // intensity from the invariant-density solver

    // n * (estimate - theta), per replicate (NaN for failed replicates).
    std::vector<double> finite_mle;
    std::vector<double> finite_bayes;
    std::vector<double> limit_mle;
    std::vector<double> limit_bayes;

    std::vector<double> finite_mle_quantiles;
    std::vector<double> finite_bayes_quantiles;
    std::vector<double> limit_mle_quantiles;
    std::vector<double> limit_bayes_quantiles;
    MomentSummary finite_mle_moments;
    MomentSummary finite_bayes_moments;

    double ks_mle = 0.0;    // finite vs. limit sample
    double ks_bayes = 0.0;
    std::size_t failures = 0;
};

ConvergenceReport run_finite_convergence(const ConvergenceConfig& config);

// ---------------------------------------------------------------------------
// Interval-weight sweep for the argmax report point
// ---------------------------------------------------------------------------

struct SweepConfig {
    double lambda = 0.0;
    JumpParams jump;
    double guard = 40.0;
    std::vector<double> weights;  // must contain 0, 0.5 and 1
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

struct SweepReport {
    SweepConfig config;
    std::vector<double> second_moment;  // E[(w u_m + (1-w) u_M)^2] per weight
    std::vector<double> se;             // delta-method standard errors
    std::size_t failures = 0;
};

SweepReport gamma_weight_sweep(const SweepConfig& config);

}  // namespace tarmc
