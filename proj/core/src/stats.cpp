#include "tarmc/stats.hpp"

#include <algorithm>
#include <cmath>

#include "tarmc/errors.hpp"

namespace tarmc {

double neumaier_total(const std::vector<double>& values) {
    NeumaierSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

double quantile_type7(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw config_error("quantile: empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw config_error("quantile: p must be in [0, 1]");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw config_error("ks_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double x = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] <= x) ++ia;
        while (ib < b.size() && b[ib] <= x) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na -
                                 static_cast<double>(ib) / nb));
    }
    return d;
}

MomentSummary summarize_moments(const std::vector<double>& sample) {
    if (sample.empty()) throw config_error("summarize_moments: empty sample");
    const double n = static_cast<double>(sample.size());

    NeumaierSum s1, s2, s4;
    for (double v : sample) {
        s1.add(v);
        s2.add(v * v);
        s4.add(v * v * v * v);
    }
    const double mean = s1.value() / n;
    const double m2 = s2.value() / n;
    const double m4 = s4.value() / n;

    MomentSummary out;
    out.count = sample.size();
    out.mean = mean;
    out.second_moment = m2;
    // Sample (n-1) variance for the mean's standard error.
    const double var =
        sample.size() > 1 ? std::max(0.0, (s2.value() - n * mean * mean) / (n - 1.0))
                          : 0.0;
    out.mean_se = std::sqrt(var / n);
    // Var(hat m2) = (m4 - m2^2) / n.
    out.second_moment_se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
    return out;
}

}  // namespace tarmc
