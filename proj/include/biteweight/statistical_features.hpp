#pragma once

#include <span>
#include <vector>

#include "biteweight/config.hpp"
#include "biteweight/types.hpp"

namespace biteweight::statistical {

struct WindowStats {
    double energy = 0.0;          // E: sum of squared gyroscope samples
    double total_variance = 0.0;  // V: sum of the six per-channel variances
    double gy_range = 0.0;        // R
    double az_entropy = 0.0;      // S, nats
};

/// Shannon entropy (nats) of an equal-width histogram over [min, max] of `x`.
/// Empty bins contribute nothing; a constant series has entropy 0.
double histogram_entropy(std::span<const double> x, int bins);

WindowStats window_stats(const ImuStream& bite, std::size_t begin, std::size_t end, int entropy_bins);

/// Sliding windows of round(window_s * fs) samples every round(step_s * fs)
/// samples. A bite shorter than one window yields a single whole-bite window.
std::vector<WindowStats> slide_windows(const ImuStream& bite, const StatisticalConfig& config = {});

struct StatFeatures {
    double f3 = 0.0;
    double f4 = 0.0;
    double f5 = 0.0;
    double f6 = 0.0;
};

StatFeatures aggregate(std::span<const WindowStats> stats);

}  // namespace biteweight::statistical
