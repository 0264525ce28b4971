#include "tarmc/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tarmc/errors.hpp"
#include "tarmc/stats.hpp"

namespace tarmc {

namespace {

constexpr double kSqrtTwoPi = 2.50662827463100050242;

double gauss_pdf(double x, double sd) {
    const double z = x / sd;
    return std::exp(-0.5 * z * z) / (sd * kSqrtTwoPi);
}

void validate_density_params(const TarParams& p) {
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw config_error("density: sigma must be finite and > 0");
    if (!std::isfinite(p.rho1) || !std::isfinite(p.rho2) || !std::isfinite(p.theta))
        throw config_error("density: rho1, rho2, theta must be finite");
    if (std::abs(p.rho2) >= 1.0) throw config_error("density: |rho2| must be < 1");
    if (p.sidedness == Sidedness::one_sided && std::abs(p.rho1) >= 1.0)
        throw config_error("density: |rho1| must be < 1 for the one-sided model");
    if (p.sidedness == Sidedness::two_sided && !(p.theta > 0.0))
        throw config_error("density: two-sided model needs theta > 0");
}

double trapezoid_mass(const std::vector<double>& f, double h) {
    NeumaierSum acc;
    for (double v : f) acc.add(v);
    return (acc.value() - 0.5 * (f.front() + f.back())) * h;
}

}  // namespace

std::vector<double> apply_transfer_operator(const TarParams& params,
                                            const std::vector<double>& grid,
                                            const std::vector<double>& f) {
    if (grid.size() != f.size() || grid.size() < 2)
        throw config_error("density: grid/value size mismatch");
    const std::size_t p = grid.size();
    std::vector<double> out(p, 0.0);
    const double h = grid[1] - grid[0];
    for (std::size_t i = 0; i < p; ++i) {
        const double y = grid[i];
        NeumaierSum acc;
        for (std::size_t j = 0; j < p; ++j) {
            const double coef = params.inner(grid[j]) ? params.rho1 : params.rho2;
            double w = f[j] * gauss_pdf(y - coef * grid[j], params.sigma);
            if (j == 0 || j + 1 == p) w *= 0.5;
            acc.add(w);
        }
        out[i] = acc.value() * h;
    }
    return out;
}

DensitySolution solve_density(const TarParams& params, GridSpec grid, double tol,
                              std::size_t max_iter) {
    validate_density_params(params);
    if (!(tol > 0.0)) throw config_error("density: tol must be > 0");
    if (max_iter == 0) throw config_error("density: max_iter must be >= 1");

    const double outer_sd = params.sigma / std::sqrt(1.0 - params.rho2 * params.rho2);
    const double abs_theta = std::abs(params.theta);

    // Tail rule: the grid must reach six tail-governing standard deviations
    // past the threshold, otherwise truncated mass corrupts the fixed point.
    const double rho_tail = params.sidedness == Sidedness::two_sided
                                ? std::abs(params.rho2)
                                : std::max(std::abs(params.rho1), std::abs(params.rho2));
    const double tail_sd = params.sigma / std::sqrt(1.0 - rho_tail * rho_tail);

    double x_max = grid.x_max > 0.0 ? grid.x_max : 6.0 * tail_sd + abs_theta;
    std::size_t points = grid.points > 0 ? grid.points : 2001;

    if (points < 401) throw config_error("density: need at least 401 grid points");
    if (!(x_max > abs_theta)) throw config_error("density: theta outside grid extent");
    if (x_max < 6.0 * tail_sd + abs_theta - 1e-9)
        throw config_error("density: grid too small, tail mass beyond x_max not negligible");

    // Snap the spacing so that +-theta (and 0) are exact grid points.
    const double h0 = 2.0 * x_max / static_cast<double>(points - 1);
    double h = h0;
    if (abs_theta > 0.0) {
        const double m = std::max(1.0, std::round(abs_theta / h0));
        h = abs_theta / m;
    }
    const std::size_t half = static_cast<std::size_t>(std::ceil(x_max / h - 1e-9));
    const std::size_t p = 2 * half + 1;
    if (p > 10 * points)
        throw config_error(
            "density: theta too close to zero for the requested resolution");
    if (p > 7000) throw config_error("density: snapped grid exceeds 7000 points");

    DensitySolution sol;
    sol.params = params;
    sol.step = h;
    sol.grid.resize(p);
    for (std::size_t i = 0; i < p; ++i)
        sol.grid[i] = (static_cast<double>(i) - static_cast<double>(half)) * h;

    // Dense kernel: K[i][j] = phi_sigma(y_i - c_j x_j) * trapezoid weight_j.
    std::vector<double> kernel(p * p);
    for (std::size_t j = 0; j < p; ++j) {
        const double x = sol.grid[j];
        const double cx = (params.inner(x) ? params.rho1 : params.rho2) * x;
        const double wj = (j == 0 || j + 1 == p) ? 0.5 * h : h;
        for (std::size_t i = 0; i < p; ++i)
            kernel[i * p + j] = gauss_pdf(sol.grid[i] - cx, params.sigma) * wj;
    }

    // Start from the outer-regime Gaussian and iterate to the fixed point.
    std::vector<double> f(p), g(p);
    for (std::size_t i = 0; i < p; ++i) f[i] = gauss_pdf(sol.grid[i], outer_sd);
    {
        const double mass = trapezoid_mass(f, h);
        for (double& v : f) v /= mass;
    }

    double residual = 0.0;
    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        for (std::size_t i = 0; i < p; ++i) {
            const double* row = kernel.data() + i * p;
            NeumaierSum acc;
            for (std::size_t j = 0; j < p; ++j) acc.add(row[j] * f[j]);
            g[i] = acc.value();
        }
        const double mass = trapezoid_mass(g, h);
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw numeric_error("density: iteration produced non-positive mass");
        residual = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            g[i] /= mass;
            if (g[i] < 0.0) throw numeric_error("density: negative density value");
            residual = std::max(residual, std::abs(g[i] - f[i]));
        }
        if (params.sidedness == Sidedness::two_sided) {
            for (std::size_t i = 0; i < p; ++i)
                if (std::abs(g[i] - g[p - 1 - i]) > 1e-8)
                    throw numeric_error("density: evenness lost during iteration");
        }
        f.swap(g);
        if (residual < tol) break;
    }
    if (residual >= tol)
        throw numeric_error("density: no convergence after " + std::to_string(max_iter) +
                            " iterations, residual " + std::to_string(residual));

    sol.values = std::move(f);
    sol.residual = residual;
    sol.iterations = it + 1;
    sol.lambda = intensity(sol, params.sidedness);
    return sol;
}

double intensity(const DensitySolution& sol, Sidedness sidedness) {
    if (sol.grid.size() != sol.values.size() || sol.grid.size() < 2)
        throw config_error("intensity: malformed density solution");
    const double theta = sol.params.theta;
    if (!(theta >= sol.grid.front() && theta <= sol.grid.back()))
        throw config_error("intensity: theta outside the density grid");

    const auto it = std::upper_bound(sol.grid.begin(), sol.grid.end(), theta);
    std::size_t hi = static_cast<std::size_t>(it - sol.grid.begin());
    hi = std::min(std::max<std::size_t>(hi, 1), sol.grid.size() - 1);
    const std::size_t lo = hi - 1;
    const double t = (theta - sol.grid[lo]) / (sol.grid[hi] - sol.grid[lo]);
    const double f_theta = sol.values[lo] + t * (sol.values[hi] - sol.values[lo]);
    return (sidedness == Sidedness::two_sided ? 2.0 : 1.0) * f_theta;
}

double silverman_bandwidth(const std::vector<double>& data) {
    if (data.size() < 2) throw config_error("bandwidth: need at least 2 observations");
    NeumaierSum s1, s2;
    for (double v : data) {
        s1.add(v);
        s2.add(v * v);
    }
    const double n = static_cast<double>(data.size());
    const double mean = s1.value() / n;
    const double var = std::max(0.0, (s2.value() - n * mean * mean) / (n - 1.0));
    const double sd = std::sqrt(var);
    if (!(sd > 0.0)) throw config_error("bandwidth: degenerate sample");
    return 1.06 * sd * std::pow(n, -0.2);
}

std::vector<double> kde(const Trajectory& traj, std::optional<double> bandwidth,
                        const std::vector<double>& grid) {
    const auto& data = traj.values;
    if (data.empty()) throw config_error("kde: empty trajectory");
    double h;
    if (bandwidth.has_value()) {
        h = *bandwidth;
        if (!(h > 0.0)) throw config_error("kde: bandwidth must be > 0");
    } else {
        if (data.size() < 1000)
            throw config_error("kde: automatic bandwidth needs >= 1000 observations");
        h = silverman_bandwidth(data);
    }

    std::vector<double> out(grid.size(), 0.0);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        NeumaierSum acc;
        for (double x : data) acc.add(gauss_pdf(grid[i] - x, h));
        out[i] = acc.value() * scale;
    }
    return out;
}

}  // namespace tarmc
