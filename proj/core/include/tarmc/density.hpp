#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tarmc/model.hpp"

namespace tarmc {

// Requested discretization for the invariant-density solver.  Non-positive /
// zero fields select the defaults: x_max = 6*sigma/sqrt(1 - rho2^2) + |theta|
// and points = 2001.  The actual grid is snapped so that 0 and +-theta are
// exact grid points; the realized spacing and extent are reported in the
// solution.
struct GridSpec {
    double x_max = 0.0;
    std::size_t points = 0;
};

// Stationary density of the TAR chain on a uniform symmetric grid, obtained
// as the fixed point of the one-step transfer operator under trapezoid
// quadrature.
struct DensitySolution {
    std::vector<double> grid;
    std::vector<double> values;   // nonnegative, trapezoid mass 1
    double lambda = 0.0;          // threshold-crossing intensity (see intensity())
    double residual = 0.0;        // final sup-norm update
    std::size_t iterations = 0;
    double step = 0.0;            // grid spacing
    TarParams params;             // generating model (theta, sigma, regimes)
};

// Iterates f <- normalized K f to tolerance `tol` in sup norm, starting from
// the Gaussian N(0, sigma^2 / (1 - rho2^2)).  Throws numeric_error when the
// iteration fails to converge within max_iter or an invariant (positivity;
// evenness in the two-sided case) breaks; config_error when the grid cannot
// support the requested model (threshold outside, insufficient tail room,
// too few points).
DensitySolution solve_density(const TarParams& params, GridSpec grid = {},
                              double tol = 1e-10, std::size_t max_iter = 10000);

// One application of the transfer operator to `f` on `grid` (trapezoid
// weights, no renormalization); used to cross-check converged solutions.
std::vector<double> apply_transfer_operator(const TarParams& params,
                                            const std::vector<double>& grid,
                                            const std::vector<double>& f);

// Event intensity of the threshold-crossing point process in the limit
// experiment: linear interpolation of the stationary density at the
// threshold, doubled in the two-sided case (both +-theta contribute).
double intensity(const DensitySolution& sol, Sidedness sidedness);

// Gaussian kernel density estimate of the trajectory's marginal law on
// `grid`.  Pass bandwidth std::nullopt for the normal-reference rule
// 1.06 * sd * N^{-1/5} (requires N >= 1000 observations); an explicit
// bandwidth must be > 0.
std::vector<double> kde(const Trajectory& traj, std::optional<double> bandwidth,
                        const std::vector<double>& grid);

double silverman_bandwidth(const std::vector<double>& data);

}  // namespace tarmc
