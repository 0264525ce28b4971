#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace tarmc {

// Neumaier-compensated accumulator.  The piecewise likelihood builder and its
// dense-grid cross-check must agree to ~1e-12 in absolute log-likelihood, so
// plain summation drift is not acceptable there.
class NeumaierSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double neumaier_total(const std::vector<double>& values);

// Linear-interpolation quantile on h = (n-1)p (the common "type 7" rule).
// `sorted` must be ascending; p in [0, 1].
double quantile_type7(const std::vector<double>& sorted, double p);

// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
double ks_distance(std::vector<double> a, std::vector<double> b);

// Summary of a replicate sample: first two moments with standard errors
// (mean: sd/sqrt(n); second moment: delta method from the fourth moment).
struct MomentSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double mean_se = 0.0;
    double second_moment = 0.0;
    double second_moment_se = 0.0;
};

MomentSummary summarize_moments(const std::vector<double>& sample);

}  // namespace tarmc
