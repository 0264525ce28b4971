#include "tarmc/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "tarmc/errors.hpp"
#include "tarmc/stats.hpp"

namespace tarmc {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kTieTol = 1e-9;  // absolute tolerance in log-likelihood units

double threshold_statistic(double x, Sidedness s) {
    return s == Sidedness::two_sided ? std::abs(x) : x;
}

void check_trajectory(const Trajectory& traj) {
    if (traj.values.size() < 2)
        throw config_error("likelihood: trajectory must contain at least one transition");
    for (double v : traj.values)
        if (!std::isfinite(v)) throw config_error("likelihood: non-finite trajectory value");
}

// Composite Simpson rule with `panels` panels (two subintervals each).
template <class F>
double simpson(const F& f, double a, double b, std::size_t panels) {
    const std::size_t m = 2 * panels;
    const double h = (b - a) / static_cast<double>(m);
    NeumaierSum acc;
    acc.add(f(a));
    acc.add(f(b));
    for (std::size_t k = 1; k < m; ++k) {
        const double w = (k % 2 == 1) ? 4.0 : 2.0;
        acc.add(w * f(a + h * static_cast<double>(k)));
    }
    return acc.value() * h / 3.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Prior
// ---------------------------------------------------------------------------

Prior Prior::uniform() { return Prior{}; }

Prior Prior::tabulated(std::vector<double> x, std::vector<double> p) {
    if (x.size() != p.size() || x.size() < 2)
        throw config_error("prior: need >= 2 knots with matching value count");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(p[i]))
            throw config_error("prior: non-finite knot");
        if (i > 0 && !(x[i] > x[i - 1]))
            throw config_error("prior: knots must be strictly increasing");
        if (!(p[i] > 0.0)) throw config_error("prior: density must be strictly positive");
    }

    // Trapezoid mass over the knot range, then renormalize the knot values.
    NeumaierSum mass;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        mass.add(0.5 * (p[i] + p[i + 1]) * (x[i + 1] - x[i]));
    const double total = mass.value();
    if (!(total > 0.0) || !std::isfinite(total))
        throw config_error("prior: tabulated density has non-positive mass");
    for (double& v : p) v /= total;

    NeumaierSum check;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        check.add(0.5 * (p[i] + p[i + 1]) * (x[i + 1] - x[i]));
    if (std::abs(check.value() - 1.0) > 1e-6)
        throw numeric_error("prior: renormalization failed to reach unit mass");

    Prior prior;
    prior.uniform_ = false;
    prior.x_ = std::move(x);
    prior.p_ = std::move(p);
    return prior;
}

double Prior::x_min() const {
    if (uniform_) throw config_error("prior: uniform prior has no knot range");
    return x_.front();
}

double Prior::x_max() const {
    if (uniform_) throw config_error("prior: uniform prior has no knot range");
    return x_.back();
}

double Prior::density(double theta) const {
    if (uniform_)
        throw config_error("prior: uniform density depends on the window; use bayes_finite");
    if (!(theta >= x_.front() && theta <= x_.back()))
        throw config_error("prior: evaluation point outside knot range");
    const auto it = std::upper_bound(x_.begin(), x_.end(), theta);
    const std::size_t hi = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(1, it - x_.begin()), x_.size() - 1);
    const std::size_t lo = hi - 1;
    const double t = (theta - x_[lo]) / (x_[hi] - x_[lo]);
    return p_[lo] + t * (p_[hi] - p_[lo]);
}

// ---------------------------------------------------------------------------
// PiecewiseLikelihood
// ---------------------------------------------------------------------------

double PiecewiseLikelihood::edge(std::size_t i) const {
    if (i == 0) return alpha;
    if (i == breakpoints.size() + 1) return beta;
    return breakpoints[i - 1];
}

double PiecewiseLikelihood::midpoint(std::size_t i) const {
    return 0.5 * (edge(i) + edge(i + 1));
}

// ---------------------------------------------------------------------------
// Likelihood evaluation
// ---------------------------------------------------------------------------

double loglik_at(const Trajectory& traj, double theta, const TarParams& params) {
    check_trajectory(traj);
    if (!(params.sigma > 0.0)) throw config_error("likelihood: sigma must be > 0");
    if (!(params.alpha < theta && theta < params.beta))
        throw config_error("likelihood: theta outside the window");

    TarParams local = params;
    local.theta = theta;
    const std::size_t n = traj.n();
    NeumaierSum rss;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = traj.values[j];
        const double coef = local.inner(x) ? params.rho1 : params.rho2;
        const double r = traj.values[j + 1] - coef * x;
        rss.add(r * r);
    }
    const double s2 = params.sigma * params.sigma;
    return -0.5 * static_cast<double>(n) * std::log(kTwoPi * s2) -
           rss.value() / (2.0 * s2);
}

PiecewiseLikelihood build_piecewise(const Trajectory& traj, const TarParams& params) {
    check_trajectory(traj);
    params.validate(ParamsUse::estimate);

    const std::size_t n = traj.n();
    const double s2 = params.sigma * params.sigma;

    // Residual-sum-of-squares on the first interval (alpha, b_1): statistics
    // <= alpha are inner there, everything else outer.  Collect the flip in
    // the sum for every in-window statistic: crossing a breakpoint upward
    // moves its transitions from the outer to the inner regime.
    NeumaierSum rss;
    std::vector<std::pair<double, double>> flips;  // (statistic, d1 - d2)
    flips.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = traj.values[j];
        const double s = threshold_statistic(x, params.sidedness);
        const double r1 = traj.values[j + 1] - params.rho1 * x;
        const double r2 = traj.values[j + 1] - params.rho2 * x;
        const double d1 = r1 * r1;
        const double d2 = r2 * r2;
        rss.add(s <= params.alpha ? d1 : d2);
        if (s > params.alpha && s < params.beta) flips.emplace_back(s, d1 - d2);
    }
    std::sort(flips.begin(), flips.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    PiecewiseLikelihood pl;
    pl.alpha = params.alpha;
    pl.beta = params.beta;
    pl.n = n;

    const double norm = -0.5 * static_cast<double>(n) * std::log(kTwoPi * s2);
    pl.loglik.push_back(norm - rss.value() / (2.0 * s2));
    for (std::size_t i = 0; i < flips.size();) {
        // Merge transitions sharing the exact same statistic into one breakpoint.
        const double b = flips[i].first;
        while (i < flips.size() && flips[i].first == b) {
            rss.add(flips[i].second);
            ++i;
        }
        pl.breakpoints.push_back(b);
        pl.loglik.push_back(norm - rss.value() / (2.0 * s2));
    }
    return pl;
}

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

MleResult mle_finite(const PiecewiseLikelihood& pl) {
    if (pl.loglik.empty()) throw config_error("mle_finite: empty likelihood profile");
    const double best = *std::max_element(pl.loglik.begin(), pl.loglik.end());

    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < pl.loglik.size(); ++i)
        if (pl.loglik[i] >= best - kTieTol) tied.push_back(i);

    bool contiguous = true;
    for (std::size_t k = 1; k < tied.size(); ++k)
        if (tied[k] != tied[k - 1] + 1) contiguous = false;

    MleResult res;
    res.tied_count = tied.size();
    if (contiguous) {
        res.interval_lo = pl.edge(tied.front());
        res.interval_hi = pl.edge(tied.back() + 1);
        res.tie = false;
    } else {
        res.interval_lo = pl.edge(tied.front());
        res.interval_hi = pl.edge(tied.front() + 1);
        res.tie = true;
    }
    res.theta_hat = 0.5 * (res.interval_lo + res.interval_hi);
    return res;
}

double bayes_finite(const PiecewiseLikelihood& pl, const Prior& prior) {
    if (pl.loglik.empty()) throw config_error("bayes_finite: empty likelihood profile");
    if (!prior.is_uniform() &&
        !(prior.x_min() <= pl.alpha && prior.x_max() >= pl.beta))
        throw config_error("bayes_finite: tabulated prior does not cover the window");

    const double best = *std::max_element(pl.loglik.begin(), pl.loglik.end());
    NeumaierSum num;  // integral of theta * prior * relative likelihood
    NeumaierSum den;  // integral of prior * relative likelihood

    for (std::size_t i = 0; i < pl.intervals(); ++i) {
        const double w = std::exp(pl.loglik[i] - best);
        const double lo = pl.edge(i);
        const double hi = pl.edge(i + 1);
        if (prior.is_uniform()) {
            // Constant prior density cancels in the ratio.
            num.add(w * 0.5 * (hi * hi - lo * lo));
            den.add(w * (hi - lo));
            continue;
        }
        // Integrate exactly through the prior's kinks: split the interval at
        // interior knots so each Simpson segment sees a smooth integrand.
        const auto& knots = prior.knots_x();
        std::vector<double> cuts{lo};
        for (double k : knots)
            if (k > lo && k < hi) cuts.push_back(k);
        cuts.push_back(hi);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double a = cuts[c];
            const double b = cuts[c + 1];
            if (!(b > a)) continue;
            num.add(w * simpson([&](double t) { return t * prior.density(t); }, a, b, 8));
            den.add(w * simpson([&](double t) { return prior.density(t); }, a, b, 8));
        }
    }

    const double d = den.value();
    if (!(d > 0.0) || !std::isfinite(d))
        throw numeric_error("bayes_finite: posterior mass vanished");
    return num.value() / d;
}

}  // namespace tarmc
