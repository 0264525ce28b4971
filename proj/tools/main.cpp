// Command line interface for the threshold-autoregression toolkit:
// simulation, exact threshold estimation, invariant-density solving, limit
// experiment sampling, and the Monte Carlo studies built on top of them.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tarmc/density.hpp"
#include "tarmc/errors.hpp"
#include "tarmc/harness.hpp"
#include "tarmc/io.hpp"
#include "tarmc/likelihood.hpp"
#include "tarmc/limit.hpp"
#include "tarmc/model.hpp"

namespace {

using namespace tarmc;

struct ModelOpts {
    double rho1 = 0.15;
    double rho2 = 0.95;
    double sigma = 1.0;
    double theta = 2.0;
    double alpha = 0.5;
    double beta = 3.5;
    bool one_sided = false;

    TarParams params() const {
        TarParams p;
        p.rho1 = rho1;
        p.rho2 = rho2;
        p.sigma = sigma;
        p.theta = theta;
        p.alpha = alpha;
        p.beta = beta;
        p.sidedness = one_sided ? Sidedness::one_sided : Sidedness::two_sided;
        return p;
    }
};

void add_model_opts(CLI::App* cmd, ModelOpts& m, bool with_window) {
    cmd->add_option("--rho1", m.rho1, "Inner-regime coefficient")->capture_default_str();
    cmd->add_option("--rho2", m.rho2, "Outer-regime coefficient")->capture_default_str();
    cmd->add_option("--sigma", m.sigma, "Innovation standard deviation")
        ->capture_default_str();
    cmd->add_option("--theta", m.theta, "True threshold")->capture_default_str();
    cmd->add_flag("--one-sided", m.one_sided,
                  "Threshold acts on the level x < theta instead of |x| < theta");
    if (with_window) {
        cmd->add_option("--alpha", m.alpha, "Left end of the threshold window")
            ->capture_default_str();
        cmd->add_option("--beta", m.beta, "Right end of the threshold window")
            ->capture_default_str();
    }
}

Prior load_prior(const std::string& prior_file) {
    if (prior_file.empty()) return Prior::uniform();
    return read_prior_csv(prior_file);
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
    CLI::App app{"Threshold autoregression: exact estimation and limit-law Monte Carlo"};
    app.require_subcommand(1);

    // ---- simulate -------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Simulate a TAR trajectory to CSV");
    ModelOpts sim_model;
    std::size_t sim_n = 5000, sim_burn = 1000;
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    add_model_opts(simulate, sim_model, true);
    simulate->add_option("--n", sim_n, "Number of transitions")->capture_default_str();
    simulate->add_option("--burn-in", sim_burn, "Discarded warm-up transitions")
        ->capture_default_str();
    simulate->add_option("--seed", sim_seed, "Master seed")->required();
    simulate->add_option("--out", sim_out, "Output trajectory CSV")->required();

    // ---- estimate -------------------------------------------------------
    auto* estimate = app.add_subcommand(
        "estimate", "Threshold MLE and posterior mean for a trajectory file");
    ModelOpts est_model;
    std::string est_input, est_out, est_prior_file;
    add_model_opts(estimate, est_model, true);
    estimate->add_option("--input", est_input, "Trajectory CSV (header j,x)")->required();
    estimate->add_option("--out", est_out, "Report JSON (stdout when omitted)");
    estimate->add_option("--prior-file", est_prior_file,
                         "Tabulated prior CSV (header theta,p); default uniform");

    // ---- density --------------------------------------------------------
    auto* density = app.add_subcommand(
        "density", "Solve the invariant-density integral equation");
    ModelOpts den_model;
    GridSpec den_grid;
    double den_tol = 1e-10;
    std::size_t den_max_iter = 10000;
    std::string den_out, den_meta, den_kde_traj, den_bandwidth = "auto";
    std::optional<double> den_lambda_ref;
    add_model_opts(density, den_model, false);
    density->add_option("--x-max", den_grid.x_max,
                        "Grid half-width (default 6 sd past the threshold)");
    density->add_option("--points", den_grid.points, "Requested grid points (default 2001)");
    density->add_option("--tol", den_tol, "Sup-norm fixed-point tolerance")
        ->capture_default_str();
    density->add_option("--max-iter", den_max_iter, "Iteration cap")->capture_default_str();
    density->add_option("--out", den_out, "Output density CSV")->required();
    density->add_option("--meta", den_meta, "Metadata JSON path");
    density->add_option("--kde-traj", den_kde_traj,
                        "Trajectory CSV; adds a kernel-density column on the same grid");
    density->add_option("--bandwidth", den_bandwidth,
                        "KDE bandwidth: 'auto' (normal reference rule) or a value > 0")
        ->capture_default_str();
    double den_lambda_ref_val = 0.0;
    auto* den_lambda_opt = density->add_option(
        "--lambda-reference", den_lambda_ref_val,
        "Externally postulated intensity echoed in the metadata for comparison");

    // ---- limit-sim ------------------------------------------------------
    auto* limitsim = app.add_subcommand(
        "limit-sim", "Sample limit likelihood-ratio paths and their estimators");
    ModelOpts lim_model;
    double lim_lambda = 0.0, lim_guard = 40.0, lim_weight = 0.5;
    std::size_t lim_reps = 20000;
    std::uint64_t lim_seed = 0;
    unsigned lim_workers = 0;
    std::string lim_out, lim_dump;
    std::size_t lim_dump_rep = 0;
    add_model_opts(limitsim, lim_model, false);
    limitsim->add_option("--lambda", lim_lambda, "Event intensity per side")->required();
    limitsim->add_option("--guard", lim_guard, "Stopping guard band in log-Z units")
        ->capture_default_str();
    limitsim->add_option("--weight", lim_weight, "Argmax-interval report weight")
        ->capture_default_str();
    limitsim->add_option("--reps", lim_reps, "Replicates")->capture_default_str();
    limitsim->add_option("--seed", lim_seed, "Master seed")->required();
    limitsim->add_option("--workers", lim_workers, "Worker threads (0 = auto)")
        ->capture_default_str();
    limitsim->add_option("--out", lim_out, "Replicate sample CSV")->required();
    limitsim->add_option("--dump-path", lim_dump, "Dump one path as JSON (debugging)");
    limitsim->add_option("--dump-rep", lim_dump_rep, "Replicate index for --dump-path")
        ->capture_default_str();

    // ---- table ----------------------------------------------------------
    auto* table = app.add_subcommand(
        "table", "Monte Carlo critical-value table of the limit estimators");
    ModelOpts tab_model;
    LimitTableConfig tab;
    std::string tab_out, tab_json, tab_samples;
    add_model_opts(table, tab_model, false);
    table->add_option("--lambda", tab.lambda, "Event intensity per side")->required();
    table->add_option("--guard", tab.guard, "Stopping guard band")->capture_default_str();
    table->add_option("--weight", tab.weight, "Argmax-interval report weight")
        ->capture_default_str();
    tab.reps = 20000;
    table->add_option("--reps", tab.reps, "Replicates")->capture_default_str();
    table->add_option("--seed", tab.seed, "Master seed")->required();
    table->add_option("--workers", tab.workers, "Worker threads (0 = auto)")
        ->capture_default_str();
    table->add_option("--probs", tab.probs, "Probability levels")
        ->delimiter(',')
        ->capture_default_str();
    table->add_option("--out", tab_out, "Critical-value table CSV")->required();
    table->add_option("--json", tab_json, "Full report JSON");
    table->add_option("--emit-samples", tab_samples,
                      "Per-replicate estimator sample CSV (histogram data)");

    // ---- converge -------------------------------------------------------
    auto* converge = app.add_subcommand(
        "converge", "Finite-sample estimator distribution vs. the limit law");
    ModelOpts con_model;
    ConvergenceConfig con;
    std::string con_out, con_table, con_prior_file;
    bool con_emit_samples = false;
    add_model_opts(converge, con_model, true);
    converge->add_option("--n", con.n, "Transitions per replicate")->capture_default_str();
    converge->add_option("--reps", con.reps, "Finite-sample replicates")
        ->capture_default_str();
    converge->add_option("--limit-reps", con.limit_reps, "Limit-law replicates")
        ->capture_default_str();
    converge->add_option("--burn-in", con.burn_in, "Warm-up transitions")
        ->capture_default_str();
    converge->add_option("--guard", con.guard, "Stopping guard band")->capture_default_str();
    converge->add_option("--weight", con.weight, "Argmax-interval report weight")
        ->capture_default_str();
    converge->add_option("--seed", con.seed, "Master seed")->required();
    converge->add_option("--workers", con.workers, "Worker threads (0 = auto)")
        ->capture_default_str();
    converge->add_option("--probs", con.probs, "Probability levels")
        ->delimiter(',')
        ->capture_default_str();
    converge->add_option("--prior-file", con_prior_file,
                         "Tabulated prior CSV; default uniform over the window");
    converge->add_option("--out", con_out, "Report JSON")->required();
    converge->add_option("--table", con_table,
                         "Critical-value CSV with MLE / BE / Simulated rows");
    converge->add_flag("--emit-samples", con_emit_samples,
                       "Embed per-replicate samples in the report JSON");

    // ---- sweep-gamma ----------------------------------------------------
    auto* sweep = app.add_subcommand(
        "sweep-gamma", "Second moment of the weighted argmax point across weights");
    ModelOpts swp_model;
    SweepConfig swp;
    swp.weights = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::string swp_out, swp_json;
    add_model_opts(sweep, swp_model, false);
    sweep->add_option("--lambda", swp.lambda, "Event intensity per side")->required();
    sweep->add_option("--guard", swp.guard, "Stopping guard band")->capture_default_str();
    swp.reps = 20000;
    sweep->add_option("--reps", swp.reps, "Replicates")->capture_default_str();
    sweep->add_option("--seed", swp.seed, "Master seed")->required();
    sweep->add_option("--workers", swp.workers, "Worker threads (0 = auto)")
        ->capture_default_str();
    sweep->add_option("--weights", swp.weights, "Weight grid (must include 0, 0.5, 1)")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--out", swp_out, "Curve CSV")->required();
    sweep->add_option("--json", swp_json, "Full report JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags and values are configuration errors
    }

    // ---- dispatch -------------------------------------------------------

    if (app.got_subcommand(simulate)) {
        const Trajectory traj = simulate_tar(sim_model.params(), sim_n, sim_seed, sim_burn);
        write_trajectory_csv(sim_out, traj);
        return 0;
    }

    if (app.got_subcommand(estimate)) {
        TarParams params = est_model.params();
        params.validate(ParamsUse::estimate);
        const Trajectory traj = read_trajectory_csv(est_input);
        const Prior prior = load_prior(est_prior_file);
        const PiecewiseLikelihood pl = build_piecewise(traj, params);
        const MleResult mle = mle_finite(pl);
        const double tilde = bayes_finite(pl, prior);
        const Json report = estimate_report_json(
            pl, mle, tilde, params, est_prior_file.empty() ? "uniform" : est_prior_file);
        if (est_out.empty())
            std::cout << report.dump(2) << '\n';
        else
            write_json_file(est_out, report);
        return 0;
    }

    if (app.got_subcommand(density)) {
        const DensitySolution sol =
            solve_density(den_model.params(), den_grid, den_tol, den_max_iter);
        std::vector<double> kde_values;
        Json extra = Json::object();
        if (!den_kde_traj.empty()) {
            const Trajectory traj = read_trajectory_csv(den_kde_traj);
            std::optional<double> bw;
            if (den_bandwidth != "auto") {
                try {
                    bw = std::stod(den_bandwidth);
                } catch (const std::exception&) {
                    throw config_error("density: --bandwidth must be 'auto' or a number");
                }
            }
            kde_values = kde(traj, bw, sol.grid);
            extra["kde"] = Json{{"source", den_kde_traj},
                                {"observations", traj.values.size()},
                                {"bandwidth", bw ? *bw : silverman_bandwidth(traj.values)}};
        }
        if (den_lambda_opt->count() > 0) den_lambda_ref = den_lambda_ref_val;
        if (den_lambda_ref) {
            extra["lambda_reference"] = *den_lambda_ref;
            extra["lambda_ratio"] = sol.lambda / *den_lambda_ref;
        }
        write_density_csv(den_out, sol, kde_values.empty() ? nullptr : &kde_values);
        if (!den_meta.empty()) write_json_file(den_meta, density_meta_json(sol, extra));
        return 0;
    }

    if (app.got_subcommand(limitsim)) {
        const TarParams mp = lim_model.params();
        const JumpParams jump{mp.rho_jump(), mp.theta, mp.sigma};
        LimitTableConfig cfg;
        cfg.lambda = lim_lambda;
        cfg.jump = jump;
        cfg.guard = lim_guard;
        cfg.weight = lim_weight;
        cfg.reps = lim_reps;
        cfg.seed = lim_seed;
        cfg.workers = lim_workers;
        const McReport report = run_limit_table(cfg);
        write_samples_csv(lim_out, report.u_hat, report.u_tilde);
        if (!lim_dump.empty()) {
            if (lim_dump_rep >= lim_reps)
                throw config_error("limit-sim: --dump-rep out of range");
            Rng rng(lim_seed, lim_dump_rep, 0);
            const LimitPath path = sample_limit_path(lim_lambda, jump, rng, lim_guard);
            write_json_file(lim_dump, path_dump_json(path));
        }
        return 0;
    }

    if (app.got_subcommand(table)) {
        const TarParams mp = tab_model.params();
        tab.jump = JumpParams{mp.rho_jump(), mp.theta, mp.sigma};
        const McReport report = run_limit_table(tab);
        write_table_csv(tab_out, tab.probs,
                        {{"MLE", report.mle_quantiles}, {"BE", report.bayes_quantiles}});
        if (!tab_json.empty())
            write_json_file(tab_json, table_report_json(report, false));
        if (!tab_samples.empty())
            write_samples_csv(tab_samples, report.u_hat, report.u_tilde);
        return 0;
    }

    if (app.got_subcommand(converge)) {
        con.params = con_model.params();
        con.prior = load_prior(con_prior_file);
        const ConvergenceReport report = run_finite_convergence(con);
        write_json_file(con_out, convergence_report_json(report, con_emit_samples));
        if (!con_table.empty())
            write_table_csv(con_table, con.probs,
                            {{"MLE", report.limit_mle_quantiles},
                             {"BE", report.limit_bayes_quantiles},
                             {"Simulated", report.finite_mle_quantiles}});
        return 0;
    }

    if (app.got_subcommand(sweep)) {
        const TarParams mp = swp_model.params();
        swp.jump = JumpParams{mp.rho_jump(), mp.theta, mp.sigma};
        const SweepReport report = gamma_weight_sweep(swp);
        write_sweep_csv(swp_out, report);
        if (!swp_json.empty()) write_json_file(swp_json, sweep_report_json(report));
        return 0;
    }

    return 2;  // unreachable: require_subcommand(1)
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const config_error& e) {
        std::fprintf(stderr, "tarmc: config error: %s\n", e.what());
        return 2;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "tarmc: numeric failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "tarmc: internal error: %s\n", e.what());
        return 1;
    }
}
