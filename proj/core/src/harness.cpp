#include "tarmc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "tarmc/errors.hpp"

namespace tarmc {

namespace {

// Replicate streams within one master seed.  Keeping the tags centralized
// guarantees that different draws of the same replicate never collide.
enum Stream : std::uint64_t {
    kLimitPath = 0,
    kFiniteTrajectory = 1,
    kConvergenceLimitPath = 2,
};

std::vector<double> finite_sorted(const std::vector<double>& sample) {
    std::vector<double> out;
    out.reserve(sample.size());
    for (double v : sample)
        if (std::isfinite(v)) out.push_back(v);
    if (out.empty()) throw numeric_error("harness: every replicate failed");
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> quantile_row(const std::vector<double>& sorted,
                                 const std::vector<double>& probs) {
    std::vector<double> out;
    out.reserve(probs.size());
    for (double p : probs) out.push_back(quantile_type7(sorted, p));
    return out;
}

void validate_probs(const std::vector<double>& probs) {
    if (probs.empty()) throw config_error("harness: probability levels must be nonempty");
    for (double p : probs)
        if (!(p > 0.0 && p < 1.0))
            throw config_error("harness: probability levels must lie in (0, 1)");
}

}  // namespace

const std::vector<double>& table_prob_levels() {
    static const std::vector<double> levels{0.025, 0.05,  0.075, 0.1,
                                            0.9,   0.925, 0.95,  0.975};
    return levels;
}

void parallel_replicates(std::size_t reps, unsigned workers,
                         const std::function<void(std::size_t)>& body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, std::max<std::size_t>(reps, 1)));

    if (workers <= 1) {
        for (std::size_t r = 0; r < reps; ++r) body(r);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t r = w; r < reps; r += workers) body(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Limit-law critical-value table
// ---------------------------------------------------------------------------

McReport run_limit_table(const LimitTableConfig& config) {
    if (config.reps < 1000) throw config_error("table: reps must be >= 1000");
    validate_probs(config.probs);
    if (!(config.weight >= 0.0 && config.weight <= 1.0))
        throw config_error("table: weight must lie in [0, 1]");

    McReport report;
    report.config = config;
    report.u_hat.assign(config.reps, 0.0);
    report.u_tilde.assign(config.reps, 0.0);

    std::vector<unsigned char> failed(config.reps, 0);
    parallel_replicates(config.reps, config.workers, [&](std::size_t r) {
        Rng rng(config.seed, r, Stream::kLimitPath);
        try {
            const LimitPath path =
                sample_limit_path(config.lambda, config.jump, rng, config.guard);
            const LimitEstimate est = estimate_limit(path, config.weight);
            report.u_hat[r] = est.u_hat;
            report.u_tilde[r] = est.u_tilde;
        } catch (const numeric_error&) {
            report.u_hat[r] = std::numeric_limits<double>::quiet_NaN();
            report.u_tilde[r] = std::numeric_limits<double>::quiet_NaN();
            failed[r] = 1;
        }
    });
    for (unsigned char f : failed) report.failures += f;

    const std::vector<double> mle_sorted = finite_sorted(report.u_hat);
    const std::vector<double> bayes_sorted = finite_sorted(report.u_tilde);
    report.mle_quantiles = quantile_row(mle_sorted, config.probs);
    report.bayes_quantiles = quantile_row(bayes_sorted, config.probs);
    report.mle_moments = summarize_moments(mle_sorted);
    report.bayes_moments = summarize_moments(bayes_sorted);
    return report;
}

// ---------------------------------------------------------------------------
// Finite-sample convergence to the limit law
// ---------------------------------------------------------------------------

ConvergenceReport run_finite_convergence(const ConvergenceConfig& config) {
    config.params.validate(ParamsUse::simulate);
    if (config.params.rho1 == config.params.rho2)
        throw config_error("converge: estimation requires rho1 != rho2");
    if (config.reps == 0 || config.limit_reps == 0)
        throw config_error("converge: reps and limit_reps must be >= 1");
    if (config.n < 500) throw config_error("converge: n must be >= 500");
    validate_probs(config.probs);

    ConvergenceReport report;
    report.config = config;

    // The limit experiment's event intensity at these parameters, from the
    // integral-equation solver.
    const DensitySolution density = solve_density(config.params, config.density_grid);
    report.lambda_solver = density.lambda;

    const double theta = config.params.theta;
    const double n_scale = static_cast<double>(config.n);

    report.finite_mle.assign(config.reps, 0.0);
    report.finite_bayes.assign(config.reps, 0.0);
    std::vector<unsigned char> failed(config.reps, 0);
    parallel_replicates(config.reps, config.workers, [&](std::size_t r) {
        try {
            const Trajectory traj =
                simulate_tar(config.params, config.n,
                             derive_seed(config.seed, r, Stream::kFiniteTrajectory),
                             config.burn_in);
            const PiecewiseLikelihood pl = build_piecewise(traj, config.params);
            report.finite_mle[r] = n_scale * (mle_finite(pl).theta_hat - theta);
            report.finite_bayes[r] = n_scale * (bayes_finite(pl, config.prior) - theta);
        } catch (const numeric_error&) {
            report.finite_mle[r] = std::numeric_limits<double>::quiet_NaN();
            report.finite_bayes[r] = std::numeric_limits<double>::quiet_NaN();
            failed[r] = 1;
        }
    });
    for (unsigned char f : failed) report.failures += f;

    const JumpParams jump{config.params.rho_jump(), theta, config.params.sigma};
    report.limit_mle.assign(config.limit_reps, 0.0);
    report.limit_bayes.assign(config.limit_reps, 0.0);
    parallel_replicates(config.limit_reps, config.workers, [&](std::size_t r) {
        Rng rng(config.seed, r, Stream::kConvergenceLimitPath);
        const LimitPath path =
            sample_limit_path(report.lambda_solver, jump, rng, config.guard);
        const LimitEstimate est = estimate_limit(path, config.weight);
        report.limit_mle[r] = est.u_hat;
        report.limit_bayes[r] = est.u_tilde;
    });

    const std::vector<double> fm = finite_sorted(report.finite_mle);
    const std::vector<double> fb = finite_sorted(report.finite_bayes);
    report.finite_mle_quantiles = quantile_row(fm, config.probs);
    report.finite_bayes_quantiles = quantile_row(fb, config.probs);
    report.limit_mle_quantiles = quantile_row(finite_sorted(report.limit_mle), config.probs);
    report.limit_bayes_quantiles =
        quantile_row(finite_sorted(report.limit_bayes), config.probs);
    report.finite_mle_moments = summarize_moments(fm);
    report.finite_bayes_moments = summarize_moments(fb);
    report.ks_mle = ks_distance(fm, report.limit_mle);
    report.ks_bayes = ks_distance(fb, report.limit_bayes);
    return report;
}

// ---------------------------------------------------------------------------
// Interval-weight sweep
// ---------------------------------------------------------------------------

SweepReport gamma_weight_sweep(const SweepConfig& config) {
    if (config.reps == 0) throw config_error("sweep: reps must be >= 1");
    if (config.weights.empty()) throw config_error("sweep: weights must be nonempty");
    bool has0 = false, has_half = false, has1 = false;
    for (double w : config.weights) {
        if (!(w >= 0.0 && w <= 1.0))
            throw config_error("sweep: weights must lie in [0, 1]");
        has0 |= std::abs(w) <= 1e-12;
        has_half |= std::abs(w - 0.5) <= 1e-12;
        has1 |= std::abs(w - 1.0) <= 1e-12;
    }
    if (!has0 || !has_half || !has1)
        throw config_error("sweep: weights must include 0, 0.5 and 1");

    SweepReport report;
    report.config = config;

    // One coupled path set: every weight is applied to the same (u_m, u_M).
    std::vector<double> u_m(config.reps), u_M(config.reps);
    std::vector<unsigned char> failed(config.reps, 0);
    parallel_replicates(config.reps, config.workers, [&](std::size_t r) {
        Rng rng(config.seed, r, Stream::kLimitPath);
        try {
            const LimitPath path =
                sample_limit_path(config.lambda, config.jump, rng, config.guard);
            const LimitEstimate est = estimate_limit(path, 0.5);
            u_m[r] = est.u_m;
            u_M[r] = est.u_M;
        } catch (const numeric_error&) {
            u_m[r] = std::numeric_limits<double>::quiet_NaN();
            u_M[r] = std::numeric_limits<double>::quiet_NaN();
            failed[r] = 1;
        }
    });
    for (unsigned char f : failed) report.failures += f;

    for (double w : config.weights) {
        std::vector<double> sample;
        sample.reserve(config.reps);
        for (std::size_t r = 0; r < config.reps; ++r) {
            const double v = w * u_m[r] + (1.0 - w) * u_M[r];
            if (std::isfinite(v)) sample.push_back(v);
        }
        if (sample.empty()) throw numeric_error("sweep: every replicate failed");
        const MomentSummary m = summarize_moments(sample);
        report.second_moment.push_back(m.second_moment);
        report.se.push_back(m.second_moment_se);
    }
    return report;
}

}  // namespace tarmc
