#include "tarmc/limit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tarmc/errors.hpp"
#include "tarmc/stats.hpp"

namespace tarmc {

namespace {

constexpr double kTieTol = 1e-9;  // absolute tolerance in log-Z units

void validate_jump(const JumpParams& jump) {
    if (!(jump.sigma > 0.0) || !std::isfinite(jump.sigma))
        throw config_error("limit: sigma must be finite and > 0");
    if (!std::isfinite(jump.rho) || !std::isfinite(jump.theta))
        throw config_error("limit: rho and theta must be finite");
    if (jump.rho * jump.theta == 0.0)
        throw config_error("limit: rho * theta must be nonzero (gamma != 0)");
}

LimitPath::Side sample_side(double lambda, const JumpParams& jump, double guard,
                            Rng& rng) {
    LimitPath::Side side;
    const double drift = jump.log_jump_drift();
    const double coef = jump.mark_coefficient();
    double t = 0.0;
    double lz = 0.0;
    while (true) {
        if (side.events() >= kLimitEventCap)
            throw numeric_error("limit: event cap of " + std::to_string(kLimitEventCap) +
                                " reached before the guard band closed the side");
        t += rng.exponential() / lambda;
        const double eps = rng.normal(jump.sigma);
        lz += drift + coef * eps;
        side.times.push_back(t);
        side.marks.push_back(eps);
        side.logz.push_back(lz);
        side.max_logz = std::max(side.max_logz, lz);
        if (lz < side.max_logz - guard) break;
    }
    return side;
}

struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    double value = 0.0;
};

// Closed constancy pieces of log Z ordered left to right.  The unbounded
// piece beyond each side's last event is omitted: the guard band guarantees
// its value sits well below that side's maximum, so it can never carry the
// argmax.
std::vector<Piece> closed_pieces(const LimitPath& path) {
    std::vector<Piece> pieces;
    const auto& neg = path.neg;
    const auto& pos = path.pos;
    pieces.reserve(neg.events() + pos.events());
    for (std::size_t l = neg.events() - 1; l-- > 0;)
        pieces.push_back({-neg.times[l + 1], -neg.times[l], neg.logz[l]});
    pieces.push_back({-neg.times[0], pos.times[0], 0.0});
    for (std::size_t l = 0; l + 1 < pos.events(); ++l)
        pieces.push_back({pos.times[l], pos.times[l + 1], pos.logz[l]});
    return pieces;
}

}  // namespace

LimitPath sample_limit_path(double lambda, const JumpParams& jump, Rng& rng,
                            double guard) {
    validate_jump(jump);
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw config_error("limit: lambda must be finite and > 0");
    if (!(guard > 0.0) || !std::isfinite(guard))
        throw config_error("limit: guard must be finite and > 0");

    LimitPath path;
    path.lambda = lambda;
    path.guard = guard;
    path.jump = jump;
    path.pos = sample_side(lambda, jump, guard, rng);
    path.neg = sample_side(lambda, jump, guard, rng);
    return path;
}

LimitEstimate estimate_limit(const LimitPath& path, double weight) {
    if (!(weight >= 0.0 && weight <= 1.0))
        throw config_error("limit: weight must lie in [0, 1]");
    if (path.pos.events() == 0 || path.neg.events() == 0)
        throw config_error("limit: path must contain at least one event per side");

    LimitEstimate est;

    // --- argmax interval -------------------------------------------------
    const std::vector<Piece> pieces = closed_pieces(path);
    double best = pieces.front().value;
    for (const Piece& p : pieces) best = std::max(best, p.value);

    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (pieces[i].value >= best - kTieTol) tied.push_back(i);

    bool contiguous = true;
    for (std::size_t k = 1; k < tied.size(); ++k)
        if (tied[k] != tied[k - 1] + 1) contiguous = false;

    if (contiguous) {
        est.u_m = pieces[tied.front()].lo;
        est.u_M = pieces[tied.back()].hi;
        est.tie = false;
    } else {
        est.u_m = pieces[tied.front()].lo;
        est.u_M = pieces[tied.front()].hi;
        est.tie = true;
    }
    est.u_hat = weight * est.u_m + (1.0 - weight) * est.u_M;

    // --- posterior-mean functionals --------------------------------------
    // Integrate u Z(u) and Z(u) over the generated range, truncated at the
    // last event of each side; weights are exp(log Z - C) with C the path
    // maximum, which cancels in the ratio.
    const double c = std::max({0.0, path.pos.max_logz, path.neg.max_logz});
    auto side_integrals = [&](const LimitPath::Side& side, double sign, double& j_out,
                              double& i_out) {
        NeumaierSum jj, ii;
        double prev_t = 0.0;
        double prev_lz = 0.0;
        for (std::size_t l = 0; l < side.events(); ++l) {
            const double w = std::exp(prev_lz - c);
            jj.add(sign * 0.5 * w * (side.times[l] * side.times[l] - prev_t * prev_t));
            ii.add(w * (side.times[l] - prev_t));
            prev_t = side.times[l];
            prev_lz = side.logz[l];
        }
        j_out = jj.value();
        i_out = ii.value();
    };
    side_integrals(path.pos, +1.0, est.j_plus, est.i_plus);
    side_integrals(path.neg, -1.0, est.j_minus, est.i_minus);

    const double mass = est.i_plus + est.i_minus;
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw numeric_error("limit: posterior mass vanished");
    est.u_tilde = (est.j_plus + est.j_minus) / mass;
    return est;
}

LimitEstimate mle_limit(const LimitPath& path, double weight) {
    return estimate_limit(path, weight);
}

LimitEstimate bayes_limit(const LimitPath& path) { return estimate_limit(path, 0.5); }

std::complex<double> char_fn_analytic(double v, double u, const JumpParams& jump,
                                      double f_theta) {
    validate_jump(jump);
    if (!(u >= 0.0)) throw config_error("limit: char_fn horizon u must be >= 0");
    if (!(f_theta > 0.0)) throw config_error("limit: f_theta must be > 0");
    const double rt2 = jump.rho * jump.rho * jump.theta * jump.theta;
    const std::complex<double> inner(-2.0 * v * v * rt2 * jump.sigma * jump.sigma,
                                     v * rt2);
    return std::exp(2.0 * f_theta * u * (std::exp(inner) - 1.0));
}

double compound_poisson_sum(double u, double lambda, const JumpParams& jump, Rng& rng) {
    validate_jump(jump);
    if (!(lambda > 0.0) || !(u >= 0.0))
        throw config_error("limit: compound_poisson_sum needs lambda > 0, u >= 0");
    const std::uint64_t count = rng.poisson(lambda * u);
    const double fixed = jump.rho * jump.rho * jump.theta * jump.theta;
    const double coef = 2.0 * jump.rho * jump.theta;
    NeumaierSum acc;
    for (std::uint64_t k = 0; k < count; ++k)
        acc.add(fixed + coef * rng.normal(jump.sigma));
    return acc.value();
}

}  // namespace tarmc
