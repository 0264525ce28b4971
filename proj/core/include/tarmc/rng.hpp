#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "tarmc/errors.hpp"

namespace tarmc {

// SplitMix64 scramble; used both as a seed-derivation hash and to decorrelate
// nearby seeds before feeding the main engine.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives the seed of one replicate stream from a master seed.  Replicates are
// then statistically independent and reproducible regardless of how they are
// scheduled across workers.  `stream` separates independent draws within one
// replicate (e.g. a finite-sample trajectory vs. a limit path).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate,
                                    std::uint64_t stream = 0) {
    return splitmix64(splitmix64(splitmix64(master) + replicate) + stream);
}

// Deterministic random stream with self-contained sampling routines.  All
// distributions are implemented on top of raw 64-bit draws so that results are
// bit-reproducible across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
    Rng(std::uint64_t master, std::uint64_t replicate, std::uint64_t stream = 0)
        : engine_(derive_seed(master, replicate, stream)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1); never returns an exact endpoint,
    // so logarithms of draws are always finite.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Mean-zero Gaussian via Box-Muller (single branch, no cached state).
    double normal(double sd = 1.0) {
        const double u1 = uniform();
        const double u2 = uniform();
        return sd * std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double exponential(double mean = 1.0) { return -mean * std::log(uniform()); }

    // Poisson count by Knuth's product method, chunked so that the
    // intermediate exp() never underflows for large means.
    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0)) throw config_error("poisson: mean must be >= 0");
        std::uint64_t total = 0;
        while (mean > 500.0) {
            total += poisson_small(500.0);
            mean -= 500.0;
        }
        return total + poisson_small(mean);
    }

private:
    std::uint64_t poisson_small(double mean) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    std::mt19937_64 engine_;
};

}  // namespace tarmc
