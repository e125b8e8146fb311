#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace biteweight::stats {

// Two-pass moments with population normalization.

inline double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    // Exact for constant series so their variance is exactly zero.
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) return x.front();
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

inline double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

inline double covariance(std::span<const double> x, std::span<const double> y) {
    if (x.empty()) return 0.0;
    const double mx = mean(x);
    const double my = mean(y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / static_cast<double>(x.size());
}

inline constexpr double kDegenerateVariance = 1e-12;

/// Biased moment coefficient m3 / m2^1.5; series with m2 <= 1e-12 give 0.
inline double skewness(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double m = mean(x);
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(x.size());
    m3 /= static_cast<double>(x.size());
    if (m2 <= kDegenerateVariance) return 0.0;
    return m3 / std::pow(m2, 1.5);
}

}  // namespace biteweight::stats
