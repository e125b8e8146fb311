#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "biteweight/config.hpp"
#include "biteweight/types.hpp"

namespace biteweight::behavioral {

struct GatheringRun {
    std::size_t start_window = 0;
    std::size_t end_window = 0;
    double duration_s = 0.0;
};

struct TransportSegment {
    std::size_t start_window = 0;
    std::size_t end_window = 0;
    double v_raw = 0.0;  // mean per-channel variance over the mapped samples
    double v_norm = 0.0;
    std::size_t d_frames = 0;
    double d_norm = 0.0;
};

/// First window whose most likely gesture is Mouth. Throws NoMouthEvent.
std::size_t first_mouth_window(std::span<const MicromovementWindow> windows);

/// Gathering run preceding `mouth_idx`. Scans backward, skipping windows
/// until one with p > strong_pick, then accumulates while p stays strong.
/// Up to max_gap_windows consecutive windows with p in [weak, strong] are
/// absorbed when the window just before them is strong again.
std::optional<GatheringRun> find_gathering_run(std::span<const MicromovementWindow> windows, std::size_t mouth_idx,
                                               const BehavioralConfig& config = {});

/// f1 in seconds; zero when no gathering run exists.
double gathering_duration(std::span<const MicromovementWindow> windows, std::size_t mouth_idx,
                          const BehavioralConfig& config = {});

/// Contiguous block of Upward windows ending at mouth_idx - 1, restricted to
/// windows after the gathering run. nullopt means the transport is empty.
/// v_raw is measured on the samples in [t_start(first), t_start(last) + 0.2).
std::optional<TransportSegment> transport_segment(std::span<const MicromovementWindow> windows,
                                                  const std::optional<GatheringRun>& run, std::size_t mouth_idx,
                                                  const ImuStream& bite, const BehavioralConfig& config = {});

/// Builds the normalized segment descriptor from its raw measurements.
TransportSegment normalize_segment(std::size_t start_window, std::size_t end_window, double v_raw,
                                   const BehavioralConfig& config = {});

/// f2 = (1 - v_norm) + ln(d_norm + 1); an empty transport scores 0.
double stillness_score(const std::optional<TransportSegment>& segment);

struct BehavioralFeatures {
    double f1 = 0.0;
    double f2 = 0.0;
    std::size_t mouth_window = 0;
    std::optional<GatheringRun> run;
    std::optional<TransportSegment> transport;
};

/// Runs the full f1/f2 extraction for one bite slice. Throws NoMouthEvent.
BehavioralFeatures extract(std::span<const MicromovementWindow> windows, const ImuStream& bite,
                           const BehavioralConfig& config = {});

}  // namespace biteweight::behavioral
