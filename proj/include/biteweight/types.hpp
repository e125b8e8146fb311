#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace biteweight {

enum class Wrist { Left, Right };

/// Column order of the IMU matrix: three accelerometer axes, then three
/// gyroscope axes.
enum class Channel : std::size_t { Ax = 0, Ay, Az, Gx, Gy, Gz };

inline constexpr std::size_t kChannelCount = 6;

constexpr std::size_t index(Channel c) { return static_cast<std::size_t>(c); }

struct ImuSample {
    double t = 0.0;                            // seconds
    std::array<double, kChannelCount> values{};  // ax ay az (m/s^2), gx gy gz (rad/s)

    double& operator[](Channel c) { return values[index(c)]; }
    double operator[](Channel c) const { return values[index(c)]; }
};

struct ImuStream {
    std::vector<ImuSample> samples;
    double fs = 0.0;  // Hz
    Wrist wrist = Wrist::Right;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double duration() const {
        return samples.size() < 2 ? 0.0 : samples.back().t - samples.front().t;
    }
    std::vector<double> channel(Channel c) const;
};

/// Micromovement classes emitted by the upstream gesture classifier:
/// pick food, upward movement, mouth, downward movement, no movement.
enum class Gesture : std::size_t { Pick = 0, Upward, Mouth, Downward, None };

inline constexpr std::size_t kGestureCount = 5;

struct MicromovementWindow {
    std::size_t index = 0;
    double t_start = 0.0;  // seconds; the window covers [t_start, t_start + 0.2]
    std::array<double, kGestureCount> probs{};

    double prob(Gesture g) const { return probs[static_cast<std::size_t>(g)]; }
    /// Most likely gesture. Ties resolve toward Mouth, otherwise toward the
    /// lower class index.
    Gesture argmax() const;
};

struct BiteAnnotation {
    std::string bite_id;
    double start_s = 0.0;
    double end_s = 0.0;
    double weight_g = 0.0;
};

struct Session {
    std::string subject_id;
    std::string session_id;
    ImuStream imu;  // timestamps already on the annotation clock
    std::vector<MicromovementWindow> micromovements;  // same clock as imu
    std::vector<BiteAnnotation> bites;
    double sync_offset_s = 0.0;
};

struct FeatureVector {
    double f1 = 0.0;  // food gathering duration (s)
    double f2 = 0.0;  // stillness score
    double f3 = 0.0;  // skewness of gyroscope energy
    double f4 = 0.0;  // skewness of total variance
    double f5 = 0.0;  // max gy range (rad/s)
    double f6 = 0.0;  // min az entropy (nats)

    std::array<double, 6> as_array() const { return {f1, f2, f3, f4, f5, f6}; }
};

std::string to_string(Wrist w);
Wrist wrist_from_string(const std::string& s);

}  // namespace biteweight
