#include "biteweight/behavioral_features.hpp"

#include <algorithm>
#include <cmath>

#include "biteweight/error.hpp"
#include "biteweight/stats.hpp"

namespace biteweight::behavioral {

std::size_t first_mouth_window(std::span<const MicromovementWindow> windows) {
    for (std::size_t k = 0; k < windows.size(); ++k) {
        if (windows[k].argmax() == Gesture::Mouth) return k;
    }
    throw Error(ErrorCode::NoMouthEvent, "no window with mouth as most likely gesture");
}

std::optional<GatheringRun> find_gathering_run(std::span<const MicromovementWindow> windows, std::size_t mouth_idx,
                                               const BehavioralConfig& config) {
    if (mouth_idx > windows.size()) throw Error(ErrorCode::InvalidParams, "mouth index out of range");
    auto strong = [&](std::size_t k) { return windows[k].prob(Gesture::Pick) > config.strong_pick; };
    auto weak = [&](std::size_t k) {
        const double p = windows[k].prob(Gesture::Pick);
        return p >= config.weak_pick && p <= config.strong_pick;
    };

    // Windows are visited backward; `k` is one past the window under test.
    std::size_t k = mouth_idx;
    while (k > 0 && !strong(k - 1)) --k;
    if (k == 0) return std::nullopt;

    const std::size_t end = k - 1;
    std::size_t start = end;
    --k;  // window `end` is strong
    while (k > 0) {
        const std::size_t prev = k - 1;
        if (strong(prev)) {
            start = prev;
            --k;
            continue;
        }
        // Try to bridge a short weak gap.
        std::size_t gap = 0;
        std::size_t probe = k;
        while (probe > 0 && weak(probe - 1) && gap < static_cast<std::size_t>(config.max_gap_windows) + 1) {
            --probe;
            ++gap;
        }
        if (gap == 0 || gap > static_cast<std::size_t>(config.max_gap_windows) || probe == 0 || !strong(probe - 1)) {
            break;
        }
        start = probe - 1;
        k = probe - 1;
    }

    GatheringRun run;
    run.start_window = start;
    run.end_window = end;
    run.duration_s = static_cast<double>(end - start + 1) * config.window_step_s;
    return run;
}

double gathering_duration(std::span<const MicromovementWindow> windows, std::size_t mouth_idx,
                          const BehavioralConfig& config) {
    const auto run = find_gathering_run(windows, mouth_idx, config);
    return run ? run->duration_s : 0.0;
}

TransportSegment normalize_segment(std::size_t start_window, std::size_t end_window, double v_raw,
                                   const BehavioralConfig& config) {
    TransportSegment seg;
    seg.start_window = start_window;
    seg.end_window = end_window;
    seg.v_raw = v_raw;
    const double v = std::clamp(v_raw, config.variance_min, config.variance_max);
    seg.v_norm = (v - config.variance_min) / (config.variance_max - config.variance_min);
    seg.d_frames = end_window - start_window + 1;
    const double d_max = static_cast<double>(config.duration_max_frames);
    seg.d_norm = std::clamp(static_cast<double>(seg.d_frames), 0.0, d_max) / d_max;
    return seg;
}

std::optional<TransportSegment> transport_segment(std::span<const MicromovementWindow> windows,
                                                  const std::optional<GatheringRun>& run, std::size_t mouth_idx,
                                                  const ImuStream& bite, const BehavioralConfig& config) {
    if (mouth_idx > windows.size()) throw Error(ErrorCode::InvalidParams, "mouth index out of range");
    const std::size_t floor_idx = run ? run->end_window + 1 : 0;
    std::size_t start = mouth_idx;
    while (start > floor_idx && windows[start - 1].argmax() == Gesture::Upward) --start;
    if (start == mouth_idx) return std::nullopt;
    const std::size_t end = mouth_idx - 1;

    const double fs = bite.fs;
    const auto n = bite.samples.size();
    auto to_sample = [&](double seconds) {
        return std::min(n, static_cast<std::size_t>(std::llround(std::max(0.0, seconds * fs))));
    };
    // Window spans are mapped to samples through their start times relative
    // to the first sample of the bite.
    const double origin = n > 0 ? bite.samples.front().t : 0.0;
    const std::size_t s0 = to_sample(windows[start].t_start - origin);
    const std::size_t s1 = to_sample(windows[end].t_start + config.window_length_s - origin);

    double v_raw = 0.0;
    if (s1 > s0) {
        for (std::size_t c = 0; c < kChannelCount; ++c) {
            std::vector<double> values;
            values.reserve(s1 - s0);
            for (std::size_t i = s0; i < s1; ++i) values.push_back(bite.samples[i].values[c]);
            v_raw += stats::variance(values);
        }
        v_raw /= static_cast<double>(kChannelCount);
    }
    return normalize_segment(start, end, v_raw, config);
}

double stillness_score(const std::optional<TransportSegment>& segment) {
    if (!segment) return 0.0;
    return (1.0 - segment->v_norm) + std::log(segment->d_norm + 1.0);
}

BehavioralFeatures extract(std::span<const MicromovementWindow> windows, const ImuStream& bite,
                           const BehavioralConfig& config) {
    BehavioralFeatures out;
    out.mouth_window = first_mouth_window(windows);
    out.run = find_gathering_run(windows, out.mouth_window, config);
    out.f1 = out.run ? out.run->duration_s : 0.0;
    out.transport = transport_segment(windows, out.run, out.mouth_window, bite, config);
    out.f2 = stillness_score(out.transport);
    return out;
}

}  // namespace biteweight::behavioral
