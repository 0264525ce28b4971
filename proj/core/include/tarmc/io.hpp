#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "tarmc/density.hpp"
#include "tarmc/harness.hpp"
#include "tarmc/likelihood.hpp"
#include "tarmc/limit.hpp"
#include "tarmc/model.hpp"

namespace tarmc {

// Insertion-ordered JSON keeps report keys in a stable, documented order.
using Json = nlohmann::ordered_json;

// Shortest exact decimal round-trip for binary64 (17 significant digits).
std::string format_double(double v);

// --- CSV -------------------------------------------------------------------

// Trajectory: header "j,x", one row per state X_0..X_n.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

// Density grid: header "x,f" (plus a "kde" column when provided).
void write_density_csv(const std::string& path, const DensitySolution& sol,
                       const std::vector<double>* kde_values = nullptr);

// Replicate estimator samples: header "rep,u_hat,u_tilde".
void write_samples_csv(const std::string& path, const std::vector<double>& u_hat,
                       const std::vector<double>& u_tilde);

// Critical-value table: first row the probability levels (empty corner cell),
// then one labeled row per estimator.
void write_table_csv(const std::string& path, const std::vector<double>& probs,
                     const std::vector<std::pair<std::string, std::vector<double>>>& rows);

// Weight-sweep curve: header "weight,second_moment,se".
void write_sweep_csv(const std::string& path, const SweepReport& report);

// Tabulated prior: header "theta,p".
Prior read_prior_csv(const std::string& path);

// --- JSON ------------------------------------------------------------------

Json params_to_json(const TarParams& params);

// Estimator report for one trajectory.
Json estimate_report_json(const PiecewiseLikelihood& pl, const MleResult& mle,
                          double theta_tilde, const TarParams& params,
                          const std::string& prior_kind);

Json density_meta_json(const DensitySolution& sol, const Json& extra = Json::object());

Json path_dump_json(const LimitPath& path);

Json table_report_json(const McReport& report, bool emit_samples);
Json convergence_report_json(const ConvergenceReport& report, bool emit_samples);
Json sweep_report_json(const SweepReport& report);

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

}  // namespace tarmc
