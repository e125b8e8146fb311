#pragma once

#include <cstdint>

#include "json.hpp"

namespace biteweight {

// Every tunable constant of the pipelines lives here. The defaults are the
// reference values; the CLI exposes each one as an override flag.

struct PreprocessConfig {
    double target_hz = 100.0;
    int highpass_taps = 501;
    double highpass_cutoff_hz = 1.0;
    int median_order = 5;
};

struct BehavioralConfig {
    double strong_pick = 0.45;     // p above this is a gathering window
    double weak_pick = 0.25;       // [weak, strong] may be bridged
    int max_gap_windows = 2;       // 0.2 s at the 0.1 s window step
    double window_step_s = 0.1;
    double window_length_s = 0.2;
    double variance_min = 1.0;
    double variance_max = 10.0;
    int duration_max_frames = 35;
};

struct StatisticalConfig {
    double window_s = 2.0;
    double step_s = 0.1;
    int entropy_bins = 16;
};

struct SvrParams {
    double c = 1.01;
    double epsilon = 0.016;
    double gap_tolerance = 1e-6;
    int max_passes = 100000;
};

struct ForestParams {
    int trees = 40;
    std::uint64_t seed = 7;
    bool bootstrap = true;
    int features_per_split = 0;  // 0 selects ceil(d / 3)
};

struct MirtchoukConfig {
    double window_s = 5.0;
    double step_s = 0.1;
};

struct PipelineConfig {
    PreprocessConfig preprocess;
    BehavioralConfig behavioral;
    StatisticalConfig statistical;
    SvrParams svr;
    ForestParams forest;
    MirtchoukConfig mirtchouk;
};

void to_json(nlohmann::json& j, const PipelineConfig& c);
void from_json(const nlohmann::json& j, PipelineConfig& c);

}  // namespace biteweight
