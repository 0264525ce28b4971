#pragma once

#include <cstdint>
#include <vector>

#include "tarmc/rng.hpp"

namespace tarmc {

// Which side of the threshold selects the inner regime.
//   two_sided: inner regime on |x| < theta (threshold acts on the magnitude).
//   one_sided: inner regime on x < theta (threshold acts on the level).
enum class Sidedness { two_sided, one_sided };

// Purpose of a parameter set; estimation runs do not know the true threshold,
// so its placement inside the window is only enforced for simulation.
enum class ParamsUse { simulate, estimate };

// Threshold autoregression
//     X_{j+1} = rho1 * X_j * 1{inner} + rho2 * X_j * 1{outer} + eps_{j+1},
// eps iid N(0, sigma^2).  (alpha, beta) is the known search window for the
// threshold.
struct TarParams {
    double rho1 = 0.0;
    double rho2 = 0.0;
    double sigma = 1.0;
    double theta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    Sidedness sidedness = Sidedness::two_sided;

    // Coefficient jump at the threshold and the induced signal-to-noise ratio
    // of one regime flip.
    double rho_jump() const { return rho2 - rho1; }
    double gamma() const { return rho_jump() * theta / sigma; }

    bool inner(double x) const {
        return sidedness == Sidedness::two_sided ? std::abs(x) < theta : x < theta;
    }

    // Throws config_error on violated invariants.  Estimation use skips the
    // theta-in-window requirement (the true threshold is unknown there) but
    // additionally requires rho1 != rho2 so the threshold is identifiable.
    void validate(ParamsUse use) const;
};

// Simulated path X_0..X_n (values.size() == n + 1) together with the seed
// and warm-up length needed to replay the generating noise stream.
struct Trajectory {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;

    std::size_t n() const { return values.empty() ? 0 : values.size() - 1; }
};

// Simulates n transitions after discarding `burn_in` warm-up transitions from
// the start X = 0.  Consumes exactly one normal draw per transition (warm-up
// included), in order, so tests can replay the noise from the seed.  Throws
// numeric_error naming the failing step if the path leaves the representable
// range.
Trajectory simulate_tar(const TarParams& params, std::size_t n, std::uint64_t seed,
                        std::size_t burn_in = 1000);

}  // namespace tarmc
