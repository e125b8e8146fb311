#include "biteweight/statistical_features.hpp"

#include <algorithm>
#include <cmath>

#include "biteweight/error.hpp"
#include "biteweight/stats.hpp"

namespace biteweight::statistical {

double histogram_entropy(std::span<const double> x, int bins) {
    if (x.empty() || bins < 1) return 0.0;
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) return 0.0;

    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    const double scale = static_cast<double>(bins) / (hi - lo);
    for (double v : x) {
        auto b = static_cast<std::size_t>((v - lo) * scale);
        counts[std::min(b, counts.size() - 1)]++;
    }
    const double n = static_cast<double>(x.size());
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

WindowStats window_stats(const ImuStream& bite, std::size_t begin, std::size_t end, int entropy_bins) {
    WindowStats ws;
    const auto& s = bite.samples;
    std::vector<double> column(end - begin);
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        for (std::size_t i = begin; i < end; ++i) column[i - begin] = s[i].values[c];
        ws.total_variance += stats::variance(column);
        if (c >= index(Channel::Gx)) {
            for (double v : column) ws.energy += v * v;
        }
        if (c == index(Channel::Gy)) {
            const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
            ws.gy_range = *hi - *lo;
        }
        if (c == index(Channel::Az)) ws.az_entropy = histogram_entropy(column, entropy_bins);
    }
    return ws;
}

std::vector<WindowStats> slide_windows(const ImuStream& bite, const StatisticalConfig& config) {
    if (bite.samples.empty()) throw Error(ErrorCode::EmptyBite, "no samples in bite");
    const std::size_t n = bite.samples.size();
    const auto length = static_cast<std::size_t>(std::llround(config.window_s * bite.fs));
    const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.step_s * bite.fs)));

    std::vector<WindowStats> out;
    if (length == 0 || n < length) {
        out.push_back(window_stats(bite, 0, n, config.entropy_bins));
        return out;
    }
    for (std::size_t begin = 0; begin + length <= n; begin += step) {
        out.push_back(window_stats(bite, begin, begin + length, config.entropy_bins));
    }
    return out;
}

StatFeatures aggregate(std::span<const WindowStats> windows) {
    if (windows.empty()) throw Error(ErrorCode::NoWindows, "no statistical windows");
    std::vector<double> energy, variance;
    energy.reserve(windows.size());
    variance.reserve(windows.size());
    StatFeatures f;
    f.f5 = windows.front().gy_range;
    f.f6 = windows.front().az_entropy;
    for (const auto& w : windows) {
        energy.push_back(w.energy);
        variance.push_back(w.total_variance);
        f.f5 = std::max(f.f5, w.gy_range);
        f.f6 = std::min(f.f6, w.az_entropy);
    }
    f.f3 = stats::skewness(energy);
    f.f4 = stats::skewness(variance);
    return f;
}

}  // namespace biteweight::statistical
