#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "biteweight/config.hpp"
#include "biteweight/types.hpp"

namespace biteweight::mirtchouk {

inline constexpr std::size_t kStatCount = 11;
inline constexpr std::size_t kShapeCount = 15;
inline constexpr std::size_t kFreqCount = 2;
inline constexpr std::size_t kWindowFeatureCount = kStatCount + kShapeCount + kFreqCount;  // 28
inline constexpr std::size_t kBiteFeatureCount = 2 * kWindowFeatureCount;                   // 56
inline constexpr int kPolyDegree = 4;

// Window layout:
//   stat  [0, 11):  6 channel means, accel total variance, gyro total
//                   variance, mean |diff| of accel magnitude, mean |diff| of
//                   gyro magnitude, cov(accel magnitude, gyro magnitude)
//   shape [11, 26): quartic coefficients (c0..c4) for ax, ay, az over
//                   normalized time in [0, 1]
//   freq  [26, 28): mean and std across channels of per-channel ZCR
using WindowFeatures = std::array<double, kWindowFeatureCount>;
using BiteVector = std::array<double, kBiteFeatureCount>;

/// Least-squares polynomial coefficients (lowest order first) of `y`
/// sampled at t_i = i / (n - 1). Minimum-norm solution when n <= degree.
std::array<double, kPolyDegree + 1> fit_quartic(std::span<const double> y);

/// Sign changes / (n - 1); zero is counted as positive.
double zero_crossing_rate(std::span<const double> x);

WindowFeatures window_features(const ImuStream& bite, std::size_t begin, std::size_t end);

/// Windows of round(window_s * fs) samples every round(step_s * fs) samples.
/// A bite shorter than one window gives a single whole-bite window.
std::vector<WindowFeatures> windows(const ImuStream& bite, const MirtchoukConfig& config = {});

/// Column names of a BiteVector, e.g. "mean_ax_mean" and "mean_ax_std".
std::vector<std::string> feature_names();

/// 28 means followed by 28 population standard deviations.
BiteVector bite_vector(std::span<const WindowFeatures> windows);

}  // namespace biteweight::mirtchouk
