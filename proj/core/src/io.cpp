#include "tarmc/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tarmc/errors.hpp"

namespace tarmc {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("io: cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("io: cannot open '" + path + "' for reading");
    return in;
}

double parse_double(const std::string& field, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used])))
            ++used;
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw config_error("io: malformed number '" + field + "' in " + context);
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

Json sample_json(const std::vector<double>& v) {
    Json arr = Json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

Json moments_json(const MomentSummary& m) {
    return Json{{"count", m.count},
                {"mean", m.mean},
                {"mean_se", m.mean_se},
                {"second_moment", m.second_moment},
                {"second_moment_se", m.second_moment_se}};
}

Json quantiles_json(const std::vector<double>& probs, const std::vector<double>& q) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < probs.size(); ++i)
        obj[format_double(probs[i])] = q[i];
    return obj;
}

Json jump_to_json(const JumpParams& jump) {
    return Json{{"rho", jump.rho},
                {"theta", jump.theta},
                {"sigma", jump.sigma},
                {"gamma", jump.gamma()}};
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    // Shortest decimal that parses back to the same binary64; 17 significant
    // digits always suffice.
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out = open_out(path);
    out << "j,x\n";
    for (std::size_t j = 0; j < traj.values.size(); ++j)
        out << j << ',' << format_double(traj.values[j]) << '\n';
    if (!out) throw config_error("io: failed writing '" + path + "'");
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "j,x")
        throw config_error("io: '" + path + "' is not a trajectory file (want header j,x)");

    Trajectory traj;
    std::size_t expected = 0;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw config_error("io: bad row in '" + path + "': " + line);
        const double j = parse_double(fields[0], path);
        if (j != static_cast<double>(expected))
            throw config_error("io: non-contiguous index in '" + path + "'");
        const double x = parse_double(fields[1], path);
        if (!std::isfinite(x))
            throw config_error("io: non-finite value in '" + path + "'");
        traj.values.push_back(x);
        ++expected;
    }
    if (traj.values.size() < 2)
        throw config_error("io: trajectory in '" + path + "' needs >= 2 states");
    return traj;
}

void write_density_csv(const std::string& path, const DensitySolution& sol,
                       const std::vector<double>* kde_values) {
    if (kde_values && kde_values->size() != sol.grid.size())
        throw config_error("io: kde column length mismatch");
    std::ofstream out = open_out(path);
    out << (kde_values ? "x,f,kde\n" : "x,f\n");
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        out << format_double(sol.grid[i]) << ',' << format_double(sol.values[i]);
        if (kde_values) out << ',' << format_double((*kde_values)[i]);
        out << '\n';
    }
    if (!out) throw config_error("io: failed writing '" + path + "'");
}

void write_samples_csv(const std::string& path, const std::vector<double>& u_hat,
                       const std::vector<double>& u_tilde) {
    if (u_hat.size() != u_tilde.size())
        throw config_error("io: sample column length mismatch");
    std::ofstream out = open_out(path);
    out << "rep,u_hat,u_tilde\n";
    for (std::size_t r = 0; r < u_hat.size(); ++r)
        out << r << ',' << format_double(u_hat[r]) << ',' << format_double(u_tilde[r])
            << '\n';
    if (!out) throw config_error("io: failed writing '" + path + "'");
}

void write_table_csv(const std::string& path, const std::vector<double>& probs,
                     const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
    std::ofstream out = open_out(path);
    for (double p : probs) out << ',' << format_double(p);
    out << '\n';
    for (const auto& [label, values] : rows) {
        if (values.size() != probs.size())
            throw config_error("io: table row '" + label + "' length mismatch");
        out << label;
        for (double v : values) out << ',' << format_double(v);
        out << '\n';
    }
    if (!out) throw config_error("io: failed writing '" + path + "'");
}

void write_sweep_csv(const std::string& path, const SweepReport& report) {
    std::ofstream out = open_out(path);
    out << "weight,second_moment,se\n";
    for (std::size_t i = 0; i < report.config.weights.size(); ++i)
        out << format_double(report.config.weights[i]) << ','
            << format_double(report.second_moment[i]) << ','
            << format_double(report.se[i]) << '\n';
    if (!out) throw config_error("io: failed writing '" + path + "'");
}

Prior read_prior_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "theta,p")
        throw config_error("io: '" + path + "' is not a prior file (want header theta,p)");
    std::vector<double> x, p;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw config_error("io: bad row in '" + path + "': " + line);
        x.push_back(parse_double(fields[0], path));
        p.push_back(parse_double(fields[1], path));
    }
    return Prior::tabulated(std::move(x), std::move(p));
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

Json params_to_json(const TarParams& params) {
    return Json{{"rho1", params.rho1},
                {"rho2", params.rho2},
                {"sigma", params.sigma},
                {"theta", params.theta},
                {"alpha", params.alpha},
                {"beta", params.beta},
                {"sidedness",
                 params.sidedness == Sidedness::two_sided ? "two_sided" : "one_sided"}};
}

Json estimate_report_json(const PiecewiseLikelihood& pl, const MleResult& mle,
                          double theta_tilde, const TarParams& params,
                          const std::string& prior_kind) {
    return Json{{"theta_hat", mle.theta_hat},
                {"theta_tilde", theta_tilde},
                {"n", pl.n},
                {"breakpoint_count", pl.breakpoints.size()},
                {"tie_flag", mle.tie},
                {"window", Json{{"alpha", pl.alpha}, {"beta", pl.beta}}},
                {"params", params_to_json(params)},
                {"prior", prior_kind},
                {"interval", Json{{"lo", mle.interval_lo}, {"hi", mle.interval_hi}}}};
}

Json density_meta_json(const DensitySolution& sol, const Json& extra) {
    Json j{{"lambda", sol.lambda},
           {"residual", sol.residual},
           {"iterations", sol.iterations},
           {"grid", Json{{"x_max", sol.grid.back()},
                         {"points", sol.grid.size()},
                         {"step", sol.step}}},
           {"params", params_to_json(sol.params)}};
    for (const auto& [key, value] : extra.items()) j[key] = value;
    return j;
}

Json path_dump_json(const LimitPath& path) {
    auto side_json = [](const LimitPath::Side& side) {
        return Json{{"events", side.events()},
                    {"max_logz", side.max_logz},
                    {"times", sample_json(side.times)},
                    {"marks", sample_json(side.marks)},
                    {"logz", sample_json(side.logz)}};
    };
    return Json{{"lambda", path.lambda},
                {"guard", path.guard},
                {"jump", jump_to_json(path.jump)},
                {"pos", side_json(path.pos)},
                {"neg", side_json(path.neg)}};
}

Json table_report_json(const McReport& report, bool emit_samples) {
    const auto& c = report.config;
    Json j{{"config", Json{{"lambda", c.lambda},
                           {"jump", jump_to_json(c.jump)},
                           {"guard", c.guard},
                           {"weight", c.weight},
                           {"reps", c.reps},
                           {"seed", c.seed},
                           {"workers", c.workers},
                           {"probs", sample_json(c.probs)}}},
           {"failures", report.failures},
           {"mle", Json{{"quantiles", quantiles_json(c.probs, report.mle_quantiles)},
                        {"moments", moments_json(report.mle_moments)}}},
           {"bayes", Json{{"quantiles", quantiles_json(c.probs, report.bayes_quantiles)},
                          {"moments", moments_json(report.bayes_moments)}}}};
    if (emit_samples) {
        j["samples"] = Json{{"u_hat", sample_json(report.u_hat)},
                            {"u_tilde", sample_json(report.u_tilde)}};
    }
    return j;
}

Json convergence_report_json(const ConvergenceReport& report, bool emit_samples) {
    const auto& c = report.config;
    Json j{{"config",
            Json{{"params", params_to_json(c.params)},
                 {"n", c.n},
                 {"reps", c.reps},
                 {"seed", c.seed},
                 {"workers", c.workers},
                 {"burn_in", c.burn_in},
                 {"limit_reps", c.limit_reps},
                 {"guard", c.guard},
                 {"weight", c.weight},
                 {"prior", c.prior.is_uniform() ? "uniform" : "tabulated"},
                 {"probs", sample_json(c.probs)}}},
           {"lambda_solver", report.lambda_solver},
           {"failures", report.failures},
           {"ks", Json{{"mle", report.ks_mle}, {"bayes", report.ks_bayes}}},
           {"finite",
            Json{{"mle_quantiles", quantiles_json(c.probs, report.finite_mle_quantiles)},
                 {"bayes_quantiles",
                  quantiles_json(c.probs, report.finite_bayes_quantiles)},
                 {"mle_moments", moments_json(report.finite_mle_moments)},
                 {"bayes_moments", moments_json(report.finite_bayes_moments)}}},
           {"limit",
            Json{{"mle_quantiles", quantiles_json(c.probs, report.limit_mle_quantiles)},
                 {"bayes_quantiles",
                  quantiles_json(c.probs, report.limit_bayes_quantiles)}}}};
    if (emit_samples) {
        j["samples"] = Json{{"finite_mle", sample_json(report.finite_mle)},
                            {"finite_bayes", sample_json(report.finite_bayes)},
                            {"limit_mle", sample_json(report.limit_mle)},
                            {"limit_bayes", sample_json(report.limit_bayes)}};
    }
    return j;
}

Json sweep_report_json(const SweepReport& report) {
    const auto& c = report.config;
    Json curve = Json::array();
    for (std::size_t i = 0; i < c.weights.size(); ++i)
        curve.push_back(Json{{"weight", c.weights[i]},
                             {"second_moment", report.second_moment[i]},
                             {"se", report.se[i]}});
    return Json{{"config", Json{{"lambda", c.lambda},
                                {"jump", jump_to_json(c.jump)},
                                {"guard", c.guard},
                                {"reps", c.reps},
                                {"seed", c.seed},
                                {"workers", c.workers}}},
                {"failures", report.failures},
                {"curve", curve}};
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw config_error("io: failed writing '" + path + "'");
}

Json read_json_file(const std::string& path) {
    std::ifstream in = open_in(path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error("io: invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

}  // namespace tarmc
