#include "biteweight/mirtchouk.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "biteweight/error.hpp"
#include "biteweight/stats.hpp"

namespace biteweight::mirtchouk {

std::array<double, kPolyDegree + 1> fit_quartic(std::span<const double> y) {
    constexpr int kTerms = kPolyDegree + 1;
    const auto n = static_cast<Eigen::Index>(y.size());
    std::array<double, kTerms> out{};
    if (n == 0) return out;

    Eigen::MatrixXd design(n, kTerms);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        double power = 1.0;
        for (int k = 0; k < kTerms; ++k) {
            design(i, k) = power;
            power *= t;
        }
        rhs(i) = y[static_cast<std::size_t>(i)];
    }

    Eigen::VectorXd coef;
    if (n >= kTerms) {
        const Eigen::MatrixXd normal = design.transpose() * design;
        coef = normal.ldlt().solve(design.transpose() * rhs);
    } else {
        coef = design.completeOrthogonalDecomposition().solve(rhs);
    }
    for (int k = 0; k < kTerms; ++k) out[static_cast<std::size_t>(k)] = coef(k);
    return out;
}

double zero_crossing_rate(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    std::size_t changes = 0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if ((x[i - 1] >= 0.0) != (x[i] >= 0.0)) ++changes;
    }
    return static_cast<double>(changes) / static_cast<double>(x.size() - 1);
}

WindowFeatures window_features(const ImuStream& bite, std::size_t begin, std::size_t end) {
    const std::size_t m = end - begin;
    std::array<std::vector<double>, kChannelCount> ch;
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        ch[c].resize(m);
        for (std::size_t i = 0; i < m; ++i) ch[c][i] = bite.samples[begin + i].values[c];
    }
    std::vector<double> accel_mag(m), gyro_mag(m);
    for (std::size_t i = 0; i < m; ++i) {
        accel_mag[i] = std::sqrt(ch[0][i] * ch[0][i] + ch[1][i] * ch[1][i] + ch[2][i] * ch[2][i]);
        gyro_mag[i] = std::sqrt(ch[3][i] * ch[3][i] + ch[4][i] * ch[4][i] + ch[5][i] * ch[5][i]);
    }
    auto mean_abs_diff = [](const std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        double s = 0.0;
        for (std::size_t i = 1; i < v.size(); ++i) s += std::abs(v[i] - v[i - 1]);
        return s / static_cast<double>(v.size() - 1);
    };

    WindowFeatures f{};
    std::size_t k = 0;
    for (std::size_t c = 0; c < kChannelCount; ++c) f[k++] = stats::mean(ch[c]);
    f[k++] = stats::variance(ch[0]) + stats::variance(ch[1]) + stats::variance(ch[2]);
    f[k++] = stats::variance(ch[3]) + stats::variance(ch[4]) + stats::variance(ch[5]);
    f[k++] = mean_abs_diff(accel_mag);
    f[k++] = mean_abs_diff(gyro_mag);
    f[k++] = stats::covariance(accel_mag, gyro_mag);

    for (std::size_t c = 0; c < 3; ++c) {
        for (double coef : fit_quartic(ch[c])) f[k++] = coef;
    }

    std::array<double, kChannelCount> zcr{};
    for (std::size_t c = 0; c < kChannelCount; ++c) zcr[c] = zero_crossing_rate(ch[c]);
    f[k++] = stats::mean(zcr);
    f[k++] = stats::stddev(zcr);
    return f;
}

std::vector<WindowFeatures> windows(const ImuStream& bite, const MirtchoukConfig& config) {
    if (bite.samples.empty()) throw Error(ErrorCode::EmptyBite, "no samples in bite");
    const std::size_t n = bite.samples.size();
    const auto length = static_cast<std::size_t>(std::llround(config.window_s * bite.fs));
    const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.step_s * bite.fs)));
    std::vector<WindowFeatures> out;
    if (length == 0 || n < length) {
        out.push_back(window_features(bite, 0, n));
        return out;
    }
    for (std::size_t begin = 0; begin + length <= n; begin += step) {
        out.push_back(window_features(bite, begin, begin + length));
    }
    return out;
}

BiteVector bite_vector(std::span<const WindowFeatures> windows) {
    if (windows.empty()) throw Error(ErrorCode::NoWindows, "no Mirtchouk windows");
    BiteVector out{};
    std::vector<double> series(windows.size());
    for (std::size_t f = 0; f < kWindowFeatureCount; ++f) {
        for (std::size_t w = 0; w < windows.size(); ++w) series[w] = windows[w][f];
        out[f] = stats::mean(series);
        out[kWindowFeatureCount + f] = stats::stddev(series);
    }
    return out;
}

std::vector<std::string> feature_names() {
    std::vector<std::string> window = {"mean_ax", "mean_ay", "mean_az", "mean_gx", "mean_gy", "mean_gz",
                                       "var_accel", "var_gyro", "dmag_accel", "dmag_gyro", "cov_mag"};
    for (const char* axis : {"ax", "ay", "az"}) {
        for (int k = 0; k <= kPolyDegree; ++k) window.push_back(std::string("poly_") + axis + "_c" + std::to_string(k));
    }
    window.push_back("zcr_mean");
    window.push_back("zcr_std");
    std::vector<std::string> out;
    for (const auto& n : window) out.push_back(n + "_mean");
    for (const auto& n : window) out.push_back(n + "_std");
    return out;
}

}  // namespace biteweight::mirtchouk
