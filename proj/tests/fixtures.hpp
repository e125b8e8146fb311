#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "biteweight/types.hpp"

namespace fixture {

inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("biteweight_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

/// Uniform stream with value(t, channel) samples at `fs` over [0, duration].
template <typename F>
biteweight::ImuStream stream(double fs, double duration, F value, biteweight::Wrist wrist = biteweight::Wrist::Right) {
    biteweight::ImuStream s;
    s.fs = fs;
    s.wrist = wrist;
    const auto n = static_cast<std::size_t>(std::llround(duration * fs)) + 1;
    for (std::size_t k = 0; k < n; ++k) {
        biteweight::ImuSample smp;
        smp.t = static_cast<double>(k) / fs;
        for (std::size_t c = 0; c < biteweight::kChannelCount; ++c) smp.values[c] = value(smp.t, c);
        s.samples.push_back(smp);
    }
    return s;
}

inline biteweight::MicromovementWindow window(std::size_t index, double p, double u, double m, double d, double n) {
    biteweight::MicromovementWindow w;
    w.index = index;
    w.t_start = 0.1 * static_cast<double>(index);
    w.probs = {p, u, m, d, n};
    return w;
}

/// Window whose argmax is `g`, with probability `hi` on it and the rest spread.
inline biteweight::MicromovementWindow labeled(std::size_t index, biteweight::Gesture g, double hi = 0.8) {
    biteweight::MicromovementWindow w;
    w.index = index;
    w.t_start = 0.1 * static_cast<double>(index);
    for (auto& p : w.probs) p = (1.0 - hi) / 4.0;
    w.probs[static_cast<std::size_t>(g)] = hi;
    return w;
}

/// Session over [0, duration] at 100 Hz with a full micromovement track and
/// the given bites.
inline biteweight::Session session(const std::string& subject, double duration,
                                   std::vector<biteweight::BiteAnnotation> bites, unsigned seed = 1) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.2);
    biteweight::Session s;
    s.subject_id = subject;
    s.session_id = subject + "_meal";
    s.imu = stream(100.0, duration, [&](double t, std::size_t c) { return std::sin(3.0 * t + static_cast<double>(c)) + noise(rng); });
    const auto windows = static_cast<std::size_t>(std::floor((duration - 0.2) / 0.1 + 1e-9)) + 1;
    for (std::size_t i = 0; i < windows; ++i) {
        s.micromovements.push_back(labeled(i, static_cast<biteweight::Gesture>(i % 5)));
    }
    s.bites = std::move(bites);
    return s;
}

}  // namespace fixture
