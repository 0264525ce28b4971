#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tarmc/density.hpp"
#include "tarmc/errors.hpp"
#include "tarmc/model.hpp"

using namespace tarmc;

namespace {

constexpr double kSqrtTwoPi = 2.50662827463100050242;

TarParams reference_params() {
    TarParams p;
    p.rho1 = 0.15;
    p.rho2 = 0.95;
    p.sigma = 1.0;
    p.theta = 2.0;
    p.alpha = 0.5;
    p.beta = 3.5;
    return p;
}

double normal_pdf(double x, double var) {
    return std::exp(-0.5 * x * x / var) / (kSqrtTwoPi * std::sqrt(var));
}

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(1, it - xs.begin()), xs.size() - 1);
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + t * (ys[hi] - ys[lo]);
}

double trapezoid_mass(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        mass += 0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i]);
    return mass;
}

}  // namespace

TEST_CASE("equal coefficients collapse to the AR(1) stationary Gaussian") {
    TarParams p = reference_params();
    p.rho1 = p.rho2 = 0.5;
    p.theta = 1.0;
    p.alpha = 0.5;
    p.beta = 1.5;
    const auto sol = solve_density(p);
    const double var = 1.0 / (1.0 - 0.25);
    double sup = 0.0;
    for (std::size_t i = 0; i < sol.grid.size(); ++i)
        sup = std::max(sup, std::abs(sol.values[i] - normal_pdf(sol.grid[i], var)));
    CHECK(sup < 1e-6);
}

TEST_CASE("degenerate i.i.d. case reproduces the Gaussian crossing intensity") {
    TarParams p = reference_params();
    p.rho1 = p.rho2 = 0.0;
    p.theta = 1.0;
    p.alpha = 0.5;
    p.beta = 1.5;
    const auto sol = solve_density(p);
    const double two = intensity(sol, Sidedness::two_sided);
    const double one = intensity(sol, Sidedness::one_sided);
    CHECK(two == doctest::Approx(0.48394145).epsilon(1e-5));  // 2 phi(1)
    CHECK(two == 2.0 * one);                                  // definitional factor
}

TEST_CASE("reference parameters: solution invariants and intensity") {
    const auto p = reference_params();
    const auto sol = solve_density(p);

    CHECK(sol.residual < 1e-10);
    CHECK(sol.iterations > 0);
    for (double v : sol.values) CHECK(v >= 0.0);
    CHECK(std::abs(trapezoid_mass(sol.grid, sol.values) - 1.0) < 1e-8);

    // Evenness on the symmetric grid.
    const std::size_t m = sol.grid.size();
    for (std::size_t i = 0; i < m; ++i)
        CHECK(std::abs(sol.values[i] - sol.values[m - 1 - i]) < 1e-8);

    // Grid snaps 0 and +-theta onto exact nodes.
    CHECK(std::count(sol.grid.begin(), sol.grid.end(), 0.0) == 1);
    CHECK(std::count(sol.grid.begin(), sol.grid.end(), 2.0) == 1);
    CHECK(std::count(sol.grid.begin(), sol.grid.end(), -2.0) == 1);

    // Converged fixed point survives one more operator application.
    const auto once = apply_transfer_operator(p, sol.grid, sol.values);
    double sup = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        sup = std::max(sup, std::abs(once[i] - sol.values[i]));
    CHECK(sup < 1e-9);

    // Pinned regression value for the crossing intensity at these defaults.
    CHECK(sol.lambda == doctest::Approx(0.1289613).epsilon(2e-4));
    CHECK(sol.lambda == intensity(sol, Sidedness::two_sided));
    CHECK(sol.lambda > 0.0);
}

TEST_CASE("one-sided solver keeps mass but is not forced even") {
    TarParams p = reference_params();
    p.sidedness = Sidedness::one_sided;
    p.rho1 = 0.3;
    p.theta = 0.8;
    p.alpha = -1.0;
    const auto sol = solve_density(p);
    CHECK(std::abs(trapezoid_mass(sol.grid, sol.values) - 1.0) < 1e-8);
    CHECK(sol.lambda == intensity(sol, Sidedness::one_sided));
    CHECK(sol.lambda > 0.0);
    CHECK(intensity(sol, Sidedness::two_sided) == 2.0 * sol.lambda);
}

TEST_CASE("solver output matches a kernel estimate of a long simulation") {
    const auto p = reference_params();
    const auto sol = solve_density(p);
    for (std::uint64_t seed : {101ULL, 102ULL}) {
        const auto traj = simulate_tar(p, 50000, seed, 1000);
        std::vector<double> grid;
        for (int i = 0; i <= 800; ++i) grid.push_back(-4.0 + 8.0 * i / 800.0);
        const auto est = kde(traj, std::nullopt, grid);
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            sup = std::max(sup, std::abs(est[i] - interp(sol.grid, sol.values, grid[i])));
        CHECK(sup < 0.02);
    }
}

TEST_CASE("kernel estimate of an i.i.d. Gaussian sample is close to the truth") {
    TarParams p = reference_params();
    p.rho1 = p.rho2 = 0.0;
    const auto traj = simulate_tar(p, 50000, 7, 100);

    std::vector<double> grid;
    for (int i = 0; i <= 600; ++i) grid.push_back(-3.0 + 6.0 * i / 600.0);
    const auto est = kde(traj, std::nullopt, grid);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        sup = std::max(sup, std::abs(est[i] - normal_pdf(grid[i], 1.0)));
    CHECK(sup < 0.015);

    // Ten standard deviations beyond the sample range the estimate vanishes.
    double mx = 0.0;
    for (double v : traj.values) mx = std::max(mx, std::abs(v));
    const auto far = kde(traj, std::nullopt, {mx + 10.0, -(mx + 10.0)});
    CHECK(far[0] < 1e-6);
    CHECK(far[1] < 1e-6);

    // Doubling the bandwidth lowers the estimate at a strict mode.
    const double h = silverman_bandwidth(traj.values);
    CHECK(kde(traj, 2.0 * h, {0.0})[0] < kde(traj, h, {0.0})[0]);

    // Normal-reference bandwidth: 1.06 * sd * N^(-1/5).
    double mean = 0.0;
    for (double v : traj.values) mean += v;
    mean /= static_cast<double>(traj.values.size());
    double acc = 0.0;
    for (double v : traj.values) acc += (v - mean) * (v - mean);
    const double sd = std::sqrt(acc / static_cast<double>(traj.values.size() - 1));
    const double expected =
        1.06 * sd * std::pow(static_cast<double>(traj.values.size()), -0.2);
    CHECK(h == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("kernel estimator input validation") {
    const auto p = reference_params();
    const auto long_traj = simulate_tar(p, 2000, 1, 100);
    const auto short_traj = simulate_tar(p, 500, 1, 100);
    const std::vector<double> grid{0.0, 1.0};

    CHECK_THROWS_AS(kde(long_traj, -0.1, grid), config_error);
    CHECK_THROWS_AS(kde(long_traj, 0.0, grid), config_error);
    CHECK_THROWS_AS(kde(short_traj, std::nullopt, grid), config_error);
    CHECK_NOTHROW(kde(short_traj, 0.2, grid));  // explicit bandwidth always fine
}

TEST_CASE("solver configuration errors") {
    const auto p = reference_params();

    GridSpec tiny_points;
    tiny_points.points = 200;  // below the minimum resolution
    CHECK_THROWS_AS(solve_density(p, tiny_points), config_error);

    GridSpec short_tail;
    short_tail.x_max = 5.0;  // far below the tail-coverage requirement
    CHECK_THROWS_AS(solve_density(p, short_tail), config_error);

    TarParams bad = p;
    bad.sigma = -1.0;
    CHECK_THROWS_AS(solve_density(bad), config_error);
}

TEST_CASE("non-convergence carries the last residual") {
    try {
        solve_density(reference_params(), {}, 1e-10, 3);
        FAIL("expected numeric_error");
    } catch (const numeric_error& e) {
        CHECK(std::string(e.what()).find("residual") != std::string::npos);
    }
}

TEST_CASE("intensity requires the threshold on the grid") {
    DensitySolution sol;
    sol.grid = {-1.0, 0.0, 1.0};
    sol.values = {0.25, 0.5, 0.25};
    sol.params = reference_params();
    sol.params.theta = 2.0;  // outside [-1, 1]
    CHECK_THROWS_AS(intensity(sol, Sidedness::two_sided), config_error);
}
