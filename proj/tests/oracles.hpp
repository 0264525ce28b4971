// Test-only reference implementations.  Each oracle reaches the quantity
// under test by an independent route (brute force, closed form, or direct
// path evaluation) so agreement is evidence, not tautology.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "tarmc/likelihood.hpp"
#include "tarmc/limit.hpp"
#include "tarmc/model.hpp"
#include "tarmc/stats.hpp"

namespace oracle {

// Argmax of loglik_at over a dense uniform theta grid (`points` strictly
// interior evaluation points), independent of the piecewise builder.
inline double grid_argmax_theta(const tarmc::Trajectory& traj,
                                const tarmc::TarParams& params, std::size_t points) {
    const double a = params.alpha;
    const double b = params.beta;
    double best_theta = 0.0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < points; ++k) {
        const double theta =
            a + (b - a) * (static_cast<double>(k) + 0.5) / static_cast<double>(points);
        const double v = tarmc::loglik_at(traj, theta, params);
        if (v > best_value) {
            best_value = v;
            best_theta = theta;
        }
    }
    return best_theta;
}

// Posterior mean by midpoint quadrature with cells aligned to the likelihood
// constancy intervals (and to prior knots): the integrand is then smooth
// inside every cell, so the rule converges cleanly to the exact ratio.
// `total_cells` controls resolution across the whole window.
inline double quadrature_bayes(const tarmc::PiecewiseLikelihood& pl,
                               const tarmc::Prior& prior, std::size_t total_cells) {
    double best = pl.loglik[0];
    for (double v : pl.loglik) best = std::max(best, v);

    const double window = pl.beta - pl.alpha;
    const double uniform_p = 1.0 / window;
    tarmc::NeumaierSum num, den;
    for (std::size_t i = 0; i < pl.intervals(); ++i) {
        const double w = std::exp(pl.loglik[i] - best);
        std::vector<double> cuts{pl.edge(i)};
        if (!prior.is_uniform())
            for (double k : prior.knots_x())
                if (k > pl.edge(i) && k < pl.edge(i + 1)) cuts.push_back(k);
        cuts.push_back(pl.edge(i + 1));
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double lo = cuts[c];
            const double hi = cuts[c + 1];
            const double len = hi - lo;
            if (!(len > 0.0)) continue;
            const std::size_t cells = std::max<std::size_t>(
                1, static_cast<std::size_t>(
                       std::ceil(len / window * static_cast<double>(total_cells))));
            const double h = len / static_cast<double>(cells);
            for (std::size_t m = 0; m < cells; ++m) {
                const double t = lo + (static_cast<double>(m) + 0.5) * h;
                const double p = prior.is_uniform() ? uniform_p : prior.density(t);
                num.add(w * t * p * h);
                den.add(w * p * h);
            }
        }
    }
    return num.value() / den.value();
}

// Pointwise log Z(u) of a limit path, evaluated directly from the event
// times (binary search; independent of the estimator's piece bookkeeping).
inline double log_z_at(const tarmc::LimitPath& path, double u) {
    const auto value_on_side = [](const tarmc::LimitPath::Side& side, double dist) {
        const auto it = std::upper_bound(side.times.begin(), side.times.end(), dist);
        const std::size_t events_before = static_cast<std::size_t>(it - side.times.begin());
        return events_before == 0 ? 0.0 : side.logz[events_before - 1];
    };
    return u >= 0.0 ? value_on_side(path.pos, u) : value_on_side(path.neg, -u);
}

// Posterior-mean functional by midpoint quadrature of Z over the generated
// support [-s_last, t_last], with cells no wider than `max_step` aligned to
// the jump times so every cell sees a constant Z.
inline double riemann_u_tilde(const tarmc::LimitPath& path, double max_step) {
    std::vector<double> cuts;
    for (double t : path.neg.times) cuts.push_back(-t);
    cuts.push_back(0.0);
    for (double t : path.pos.times) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());

    const double c = std::max({0.0, path.pos.max_logz, path.neg.max_logz});
    tarmc::NeumaierSum num, den;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k];
        const double hi = cuts[k + 1];
        const double len = hi - lo;
        if (!(len > 0.0)) continue;
        const std::size_t cells =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / max_step)));
        const double h = len / static_cast<double>(cells);
        for (std::size_t m = 0; m < cells; ++m) {
            const double u = lo + (static_cast<double>(m) + 0.5) * h;
            const double w = std::exp(log_z_at(path, u) - c);
            num.add(w * u * h);
            den.add(w * h);
        }
    }
    return num.value() / den.value();
}

// Lag-1 sample autocorrelation.
inline double lag1_autocorr(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        den += (x[i] - mean) * (x[i] - mean);
        if (i + 1 < n) num += (x[i] - mean) * (x[i + 1] - mean);
    }
    return num / den;
}

inline double sample_variance(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double acc = 0.0;
    for (double v : x) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(n - 1);
}

}  // namespace oracle
