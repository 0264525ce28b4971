#include "tarmc/model.hpp"

#include <cmath>
#include <string>

#include "tarmc/errors.hpp"

namespace tarmc {

void TarParams::validate(ParamsUse use) const {
    auto fail = [](const std::string& msg) { throw config_error("params: " + msg); };

    if (!(sigma > 0.0) || !std::isfinite(sigma)) fail("sigma must be finite and > 0");
    for (double v : {rho1, rho2, alpha, beta})
        if (!std::isfinite(v)) fail("rho1, rho2, alpha, beta must be finite");

    // Stability: the regime that governs large |X| must be contractive.  Two
    // sided, only the outer coefficient matters; one sided, the inner regime
    // rules the far left tail and the outer regime the far right tail.
    if (std::abs(rho2) >= 1.0) fail("|rho2| must be < 1");
    if (sidedness == Sidedness::one_sided && std::abs(rho1) >= 1.0)
        fail("|rho1| must be < 1 for the one-sided model");

    if (!(alpha < beta)) fail("window must satisfy alpha < beta");
    if (sidedness == Sidedness::two_sided && !(alpha > 0.0))
        fail("two-sided window requires alpha > 0");

    if (use == ParamsUse::simulate) {
        if (!std::isfinite(theta)) fail("theta must be finite");
        if (!(alpha < theta && theta < beta)) fail("theta must lie inside (alpha, beta)");
    } else {
        if (rho1 == rho2) fail("estimation requires rho1 != rho2");
    }
}

Trajectory simulate_tar(const TarParams& params, std::size_t n, std::uint64_t seed,
                        std::size_t burn_in) {
    params.validate(ParamsUse::simulate);
    if (n == 0) throw config_error("simulate_tar: n must be >= 1");

    Rng rng(seed);
    Trajectory traj;
    traj.seed = seed;
    traj.burn_in = burn_in;
    traj.values.reserve(n + 1);

    double x = 0.0;
    const std::size_t total = burn_in + n;
    for (std::size_t step = 0; step < total; ++step) {
        if (step >= burn_in) traj.values.push_back(x);
        const double coef = params.inner(x) ? params.rho1 : params.rho2;
        x = coef * x + rng.normal(params.sigma);
        if (!std::isfinite(x))
            throw numeric_error("simulate_tar: state diverged at step " +
                                std::to_string(step) +
                                (step < burn_in ? " (warm-up)" : ""));
    }
    traj.values.push_back(x);
    return traj;
}

}  // namespace tarmc
