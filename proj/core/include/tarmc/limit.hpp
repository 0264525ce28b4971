#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tarmc/rng.hpp"

namespace tarmc {

// Parameters of the limit experiment's log-likelihood jumps.  `rho` is the
// coefficient jump rho2 - rho1; each threshold-crossing event multiplies the
// likelihood ratio by exp(-rho^2 theta^2 / (2 sigma^2) - rho theta eps / sigma^2)
// with an independent mark eps ~ N(0, sigma^2), i.e. a log-jump distributed
// N(-gamma^2/2, gamma^2) with gamma = rho theta / sigma.
struct JumpParams {
    double rho = 0.0;
    double theta = 0.0;
    double sigma = 1.0;

    double gamma() const { return rho * theta / sigma; }
    double log_jump_drift() const { return -0.5 * gamma() * gamma(); }
    double mark_coefficient() const { return -rho * theta / (sigma * sigma); }
};

// Two-sided realization of the limit likelihood-ratio process Z(u): piecewise
// constant, Z(0) = 1, with independent Poisson(lambda) event streams on each
// side of the origin.  Event generation on a side stops once the cumulative
// log Z has fallen `guard` below that side's running maximum (and at least
// one event exists), so the argmax region is closed with truncation error
// exp(-guard).
struct LimitPath {
    struct Side {
        std::vector<double> times;  // event positions (> 0, strictly increasing)
        std::vector<double> marks;  // eps_l ~ N(0, sigma^2)
        std::vector<double> logz;   // cumulative log Z after each event
        double max_logz = 0.0;      // running max including the pre-event level 0

        std::size_t events() const { return times.size(); }
    };

    Side pos;  // u > 0
    Side neg;  // u < 0 (times are distances from the origin)
    double lambda = 0.0;
    double guard = 0.0;
    JumpParams jump;
};

inline constexpr std::size_t kLimitEventCap = 1000000;  // per side

// Draw order per event: one exponential gap (raw Exp(1) scaled by 1/lambda),
// then one Gaussian mark; the positive side is generated first.  Throws
// numeric_error if a side exceeds kLimitEventCap events before stopping.
LimitPath sample_limit_path(double lambda, const JumpParams& jump, Rng& rng,
                            double guard = 40.0);

// Argmax-interval and posterior-mean functionals of one path.  J/I are the
// signed first- and zeroth-moment integrals of Z over each half-line,
// truncated at the last generated event and scaled by exp(-max log Z) for
// overflow safety (the scaling cancels in u_tilde).
struct LimitEstimate {
    double u_hat = 0.0;    // weight * u_m + (1 - weight) * u_M
    double u_m = 0.0;      // left end of the maximizing region
    double u_M = 0.0;      // right end of the maximizing region
    bool tie = false;      // non-contiguous tie resolved to the first piece
    double u_tilde = 0.0;  // (J+ + J-) / (I+ + I-)
    double j_plus = 0.0;
    double j_minus = 0.0;
    double i_plus = 0.0;
    double i_minus = 0.0;
};

// Fills every field; `weight` in [0, 1] picks the point reported inside the
// maximizing interval (0.5 = center of gravity).
LimitEstimate estimate_limit(const LimitPath& path, double weight = 0.5);
LimitEstimate mle_limit(const LimitPath& path, double weight = 0.5);
LimitEstimate bayes_limit(const LimitPath& path);

// Analytic characteristic function of the one-sided quadratic jump sum at
// horizon u: events arrive at rate 2 * f_theta and each contributes
// rho^2 theta^2 + 2 rho theta eps_l.
std::complex<double> char_fn_analytic(double v, double u, const JumpParams& jump,
                                      double f_theta);

// Monte Carlo draw of that jump sum (Poisson count first, then one Gaussian
// mark per event).
double compound_poisson_sum(double u, double lambda, const JumpParams& jump, Rng& rng);

}  // namespace tarmc
