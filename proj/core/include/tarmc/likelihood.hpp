#pragma once

#include <cstddef>
#include <vector>

#include "tarmc/model.hpp"

namespace tarmc {

// Prior over the threshold window used by the Bayes estimator.  Either the
// uniform density on the window, or a tabulated density given by knots
// (x, p(x)) interpolated linearly and renormalized to integrate to one.
class Prior {
public:
    static Prior uniform();
    static Prior tabulated(std::vector<double> x, std::vector<double> p);

    bool is_uniform() const { return uniform_; }
    // Normalized density at theta; tabulated priors require theta within the
    // knot range.
    double density(double theta) const;
    // Knot range of a tabulated prior.
    double x_min() const;
    double x_max() const;
    const std::vector<double>& knots_x() const { return x_; }
    const std::vector<double>& knots_p() const { return p_; }

private:
    Prior() = default;
    bool uniform_ = true;
    std::vector<double> x_;
    std::vector<double> p_;  // normalized values
};

// Exact profile of the log-likelihood as a function of the threshold: the
// log-likelihood is constant between consecutive breakpoints, which are the
// distinct threshold statistics (|X_j| two-sided, X_j one-sided) falling in
// the window.  Interval i spans (edge(i), edge(i+1)) with edges
// alpha, b_1, ..., b_L, beta.
struct PiecewiseLikelihood {
    std::vector<double> breakpoints;  // strictly increasing, inside (alpha, beta)
    std::vector<double> loglik;       // breakpoints.size() + 1 interval values
    double alpha = 0.0;
    double beta = 0.0;
    std::size_t n = 0;  // number of transitions used

    std::size_t intervals() const { return loglik.size(); }
    double edge(std::size_t i) const;      // i in [0, intervals()]
    double midpoint(std::size_t i) const;  // midpoint of interval i
};

struct MleResult {
    double theta_hat = 0.0;
    // Bounds of the reported maximizing region (union of a contiguous run of
    // tied intervals, or the first maximal interval when the tie is split).
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    std::size_t tied_count = 1;  // intervals within tolerance of the maximum
    bool tie = false;            // true only for non-contiguous ties
};

// Gaussian TAR log-likelihood at a fixed threshold theta (f(X_0) dropped).
// Works for rho1 == rho2 as well; requires theta inside the window.
double loglik_at(const Trajectory& traj, double theta, const TarParams& params);

// Builds the exact piecewise-constant profile in O(n log n).  Requires an
// identifiable model (rho1 != rho2) and at least one transition.
PiecewiseLikelihood build_piecewise(const Trajectory& traj, const TarParams& params);

// Center of the maximizing interval; tolerance 1e-9 (absolute, log units) for
// ties.
MleResult mle_finite(const PiecewiseLikelihood& pl);

// Posterior mean of the threshold under `prior`, computed interval by
// interval: closed form for the uniform prior, composite Simpson (>= 8 panels
// per smooth segment) for tabulated priors.  Weights are exponentiated after
// subtracting the maximum log-likelihood, so the result is overflow-safe.
double bayes_finite(const PiecewiseLikelihood& pl, const Prior& prior);

}  // namespace tarmc
