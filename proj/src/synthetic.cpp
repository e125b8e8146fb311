#include "biteweight/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "biteweight/error.hpp"

namespace biteweight::synthetic {

using nlohmann::json;

void to_json(json& j, const Profile& p) {
    j = json{{"weight_mean_g", p.weight_mean_g},
             {"weight_std_g", p.weight_std_g},
             {"weight_min_g", p.weight_min_g},
             {"weight_max_g", p.weight_max_g},
             {"session_mean_min", p.session_mean_min},
             {"session_std_min", p.session_std_min},
             {"desk_scale", p.desk_scale},
             {"bites_per_session", p.bites_per_session},
             {"bite_mean_s", p.bite_mean_s},
             {"bite_std_s", p.bite_std_s},
             {"bite_min_s", p.bite_min_s},
             {"bite_max_s", p.bite_max_s},
             {"raw_rate_mean_hz", p.raw_rate_mean_hz},
             {"raw_rate_std_hz", p.raw_rate_std_hz},
             {"jitter_fraction", p.jitter_fraction},
             {"coupling", p.coupling},
             {"noise", p.noise},
             {"left_wrist_fraction", p.left_wrist_fraction},
             {"max_sync_offset_s", p.max_sync_offset_s},
             {"missed_mouth_rate", p.missed_mouth_rate}};
}

void from_json(const json& j, Profile& p) {
    p = Profile{};
    auto rd = [&](const char* key, auto& out) {
        if (auto it = j.find(key); it != j.end()) it->get_to(out);
    };
    rd("weight_mean_g", p.weight_mean_g);
    rd("weight_std_g", p.weight_std_g);
    rd("weight_min_g", p.weight_min_g);
    rd("weight_max_g", p.weight_max_g);
    rd("session_mean_min", p.session_mean_min);
    rd("session_std_min", p.session_std_min);
    rd("desk_scale", p.desk_scale);
    rd("bites_per_session", p.bites_per_session);
    rd("bite_mean_s", p.bite_mean_s);
    rd("bite_std_s", p.bite_std_s);
    rd("bite_min_s", p.bite_min_s);
    rd("bite_max_s", p.bite_max_s);
    rd("raw_rate_mean_hz", p.raw_rate_mean_hz);
    rd("raw_rate_std_hz", p.raw_rate_std_hz);
    rd("jitter_fraction", p.jitter_fraction);
    rd("coupling", p.coupling);
    rd("noise", p.noise);
    rd("left_wrist_fraction", p.left_wrist_fraction);
    rd("max_sync_offset_s", p.max_sync_offset_s);
    rd("missed_mouth_rate", p.missed_mouth_rate);
}

namespace {

constexpr double kGravity = 9.81;
constexpr double kWindowStep = 0.1;
constexpr double kWindowLength = 0.2;
constexpr double kEdgeMargin = 3.0;
constexpr double kMinGap = 0.5;

enum class Phase { Idle, Gather, Upward, Mouth, Downward, Rest };

struct Segment {
    double t0 = 0.0;
    double t1 = 0.0;
    Phase phase = Phase::Idle;
    bool missed_mouth = false;
    std::array<double, kChannelCount> amp{};
    std::array<double, kChannelCount> freq{};
    std::array<double, kChannelCount> offset{};
};

class Generator {
public:
    Generator(const Profile& profile, std::uint64_t seed, int subject)
        : p_(profile) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(subject)};
        rng_.seed(seq);
    }

    Session session(const std::string& subject_id) {
        Session s;
        s.subject_id = subject_id;
        s.session_id = subject_id + "_meal";
        const Wrist wrist = uniform(0.0, 1.0) < p_.left_wrist_fraction ? Wrist::Left : Wrist::Right;
        const double raw_hz = std::max(20.0, normal(p_.raw_rate_mean_hz, p_.raw_rate_std_hz));
        s.sync_offset_s = uniform(0.0, p_.max_sync_offset_s);

        std::vector<BiteAnnotation> bites;
        const double end_time = build_timeline(bites);
        s.imu = sample_imu(end_time, raw_hz, wrist);
        s.micromovements = label_windows(s.imu.samples.back().t);

        for (auto& smp : s.imu.samples) smp.t += s.sync_offset_s;
        for (auto& w : s.micromovements) w.t_start += s.sync_offset_s;
        for (auto& b : bites) {
            b.start_s += s.sync_offset_s;
            b.end_s += s.sync_offset_s;
        }
        s.bites = std::move(bites);
        return s;
    }

private:
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal(double mean, double sd) {
        return sd > 0.0 ? std::normal_distribution<double>(mean, sd)(rng_) : mean;
    }
    double truncated_normal(double mean, double sd, double lo, double hi) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const double v = normal(mean, sd);
            if (v >= lo && v <= hi) return v;
        }
        return std::clamp(mean, lo, hi);
    }

    Segment segment(double t0, double t1, Phase phase, double accel_amp, double gyro_amp) {
        Segment seg;
        seg.t0 = t0;
        seg.t1 = t1;
        seg.phase = phase;
        for (std::size_t c = 0; c < kChannelCount; ++c) {
            seg.amp[c] = c < 3 ? accel_amp : gyro_amp;
            seg.freq[c] = uniform(1.5, 4.0);
            seg.offset[c] = uniform(0.0, 2.0 * std::numbers::pi);
        }
        return seg;
    }

    // Lays out bites and gaps on the IMU clock; returns the session end time.
    double build_timeline(std::vector<BiteAnnotation>& bites) {
        struct Plan {
            double weight, pre, gather, upward, variance, mouth, down, total;
            bool missed;
        };
        std::vector<Plan> plans;
        double bite_time = 0.0;
        for (int b = 0; b < p_.bites_per_session; ++b) {
            Plan pl{};
            pl.weight = truncated_normal(p_.weight_mean_g, p_.weight_std_g, p_.weight_min_g, p_.weight_max_g);
            const double z = p_.weight_std_g > 0.0 ? (pl.weight - p_.weight_mean_g) / p_.weight_std_g : 0.0;
            const double k = p_.coupling;
            pl.gather = std::clamp(1.6 + k * 0.7 * z + p_.noise * normal(0.0, 0.35), 0.2, 6.0);
            pl.upward = std::clamp(1.2 + k * 0.4 * z + p_.noise * normal(0.0, 0.25), 0.3, 3.4);
            pl.variance = std::clamp(5.5 - k * 2.0 * z + p_.noise * normal(0.0, 1.0), 0.3, 14.0);
            pl.pre = uniform(0.1, 0.4);
            pl.mouth = uniform(0.3, 0.6);
            pl.down = uniform(0.4, 0.8);
            pl.missed = uniform(0.0, 1.0) < p_.missed_mouth_rate;
            const double core = pl.pre + pl.gather + pl.upward + pl.mouth + pl.down;
            const double drawn = truncated_normal(p_.bite_mean_s, p_.bite_std_s, p_.bite_min_s, p_.bite_max_s);
            pl.total = std::max(drawn, core + 0.1);
            bite_time += pl.total;
            plans.push_back(pl);
        }

        const auto n = static_cast<double>(plans.size());
        const double drawn_session =
            60.0 * p_.desk_scale * truncated_normal(p_.session_mean_min, p_.session_std_min, 1.0, 1e9);
        const double gaps_needed = std::max(0.0, n - 1.0) * kMinGap;
        const double session_end = std::max(drawn_session, 2.0 * kEdgeMargin + bite_time + gaps_needed);
        const double slack = session_end - 2.0 * kEdgeMargin - bite_time - gaps_needed;

        std::vector<double> gap_weights(plans.size() > 1 ? plans.size() - 1 : 0);
        double weight_sum = 0.0;
        for (auto& w : gap_weights) weight_sum += (w = uniform(0.2, 1.0));

        timeline_.clear();
        double t = kEdgeMargin;
        timeline_.push_back(segment(0.0, t, Phase::Idle, 0.1, 0.05));
        for (std::size_t b = 0; b < plans.size(); ++b) {
            const auto& pl = plans[b];
            const double start = t;
            auto add = [&](double len, Phase phase, double accel_amp, double gyro_amp) {
                timeline_.push_back(segment(t, t + len, phase, accel_amp, gyro_amp));
                t += len;
            };
            add(pl.pre, Phase::Rest, 0.15, 0.08);
            add(pl.gather, Phase::Gather, uniform(0.8, 1.6), uniform(0.6, 1.2));
            const double transport_amp = std::sqrt(2.0 * pl.variance);
            add(pl.upward, Phase::Upward, transport_amp, transport_amp);
            add(pl.mouth, Phase::Mouth, 0.5, 0.4);
            timeline_.back().missed_mouth = pl.missed;
            add(pl.down, Phase::Downward, uniform(1.2, 2.0), uniform(0.8, 1.5));
            add(start + pl.total - t, Phase::Rest, 0.15, 0.08);

            BiteAnnotation bite;
            char id[32];
            std::snprintf(id, sizeof id, "b%03zu", b + 1);
            bite.bite_id = id;
            bite.start_s = start;
            bite.end_s = start + pl.total;
            bite.weight_g = pl.weight;
            bites.push_back(bite);

            double gap = kEdgeMargin;
            if (b + 1 < plans.size()) gap = kMinGap + (weight_sum > 0.0 ? slack * gap_weights[b] / weight_sum : 0.0);
            add(gap, Phase::Idle, 0.1, 0.05);
        }
        gravity_phase_ = uniform(0.0, 2.0 * std::numbers::pi);
        return t;
    }

    const Segment& segment_at(double t) const {
        auto it = std::upper_bound(timeline_.begin(), timeline_.end(), t,
                                   [](double v, const Segment& s) { return v < s.t0; });
        if (it != timeline_.begin()) --it;
        return *it;
    }

    ImuStream sample_imu(double end_time, double raw_hz, Wrist wrist) {
        ImuStream stream;
        stream.fs = raw_hz;
        stream.wrist = wrist;
        const double dt = 1.0 / raw_hz;
        const double jitter = p_.jitter_fraction * dt;
        for (std::size_t k = 0;; ++k) {
            double t = static_cast<double>(k) * dt;
            if (k > 0) t += uniform(-jitter, jitter);
            if (t > end_time) break;
            const auto& seg = segment_at(t);
            ImuSample s;
            s.t = t;
            const double tilt = 0.5 * std::sin(2.0 * std::numbers::pi * 0.01 * t + gravity_phase_);
            const std::array<double, kChannelCount> slow = {
                kGravity * std::sin(tilt), 1.5 * std::sin(2.0 * std::numbers::pi * 0.013 * t + gravity_phase_),
                kGravity * std::cos(tilt), 0.02, -0.01, 0.015};
            for (std::size_t c = 0; c < kChannelCount; ++c) {
                const double motion =
                    seg.amp[c] * std::sin(2.0 * std::numbers::pi * seg.freq[c] * (t - seg.t0) + seg.offset[c]);
                s.values[c] = slow[c] + motion + normal(0.0, 0.03);
            }
            if (wrist == Wrist::Left) {
                s[Channel::Ax] = -s[Channel::Ax];
                s[Channel::Gy] = -s[Channel::Gy];
                s[Channel::Gz] = -s[Channel::Gz];
            }
            stream.samples.push_back(s);
        }
        return stream;
    }

    static Gesture gesture_of(const Segment& seg) {
        switch (seg.phase) {
            case Phase::Gather: return Gesture::Pick;
            case Phase::Upward: return Gesture::Upward;
            case Phase::Mouth: return seg.missed_mouth ? Gesture::Downward : Gesture::Mouth;
            case Phase::Downward: return Gesture::Downward;
            case Phase::Idle:
            case Phase::Rest: return Gesture::None;
        }
        return Gesture::None;
    }

    std::vector<MicromovementWindow> label_windows(double last_sample_t) {
        std::vector<MicromovementWindow> out;
        const auto count = static_cast<std::size_t>(std::floor((last_sample_t - kWindowLength) / kWindowStep + 1e-9)) + 1;
        for (std::size_t k = 0; k < count; ++k) {
            MicromovementWindow w;
            w.index = k;
            w.t_start = static_cast<double>(k) * kWindowStep;
            const auto truth = gesture_of(segment_at(w.t_start + kWindowLength / 2.0));
            const auto ti = static_cast<std::size_t>(truth);
            double p_true = uniform(0.55, 0.92);
            if (truth == Gesture::Pick) {
                p_true = uniform(0.0, 1.0) < 0.06 ? uniform(0.28, 0.44) : uniform(0.5, 0.9);
            }
            std::array<double, kGestureCount> rest{};
            double rest_sum = 0.0;
            for (std::size_t g = 0; g < kGestureCount; ++g) {
                if (g != ti) rest_sum += (rest[g] = uniform(0.05, 1.0));
            }
            for (std::size_t g = 0; g < kGestureCount; ++g) {
                w.probs[g] = g == ti ? p_true : (1.0 - p_true) * rest[g] / rest_sum;
            }
            out.push_back(w);
        }
        return out;
    }

    const Profile& p_;
    std::mt19937_64 rng_;
    std::vector<Segment> timeline_;
    double gravity_phase_ = 0.0;
};

void check(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidProfile, what);
}

}  // namespace

std::vector<Session> generate(int subjects, std::uint64_t seed, const Profile& profile) {
    check(subjects >= 2, "at least 2 subjects are required");
    check(profile.bites_per_session >= 1, "bites_per_session must be >= 1");
    check(profile.weight_std_g >= 0.0 && profile.weight_min_g <= profile.weight_max_g, "invalid weight range");
    check(profile.bite_min_s > 0.0 && profile.bite_min_s <= profile.bite_max_s, "invalid bite duration range");
    check(profile.desk_scale > 0.0, "desk_scale must be positive");
    check(profile.raw_rate_mean_hz >= 20.0, "raw rate must be >= 20 Hz");
    check(profile.jitter_fraction >= 0.0 && profile.jitter_fraction < 0.5, "jitter_fraction must be in [0, 0.5)");
    check(profile.noise >= 0.0, "noise must be non-negative");
    check(profile.left_wrist_fraction >= 0.0 && profile.left_wrist_fraction <= 1.0, "left_wrist_fraction in [0,1]");
    check(profile.max_sync_offset_s >= 0.0, "max_sync_offset_s must be non-negative");
    check(profile.missed_mouth_rate >= 0.0 && profile.missed_mouth_rate < 1.0, "missed_mouth_rate in [0,1)");

    std::vector<Session> out;
    for (int i = 0; i < subjects; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "S%02d", i + 1);
        Generator gen(profile, seed, i);
        out.push_back(gen.session(id));
    }
    return out;
}

}  // namespace biteweight::synthetic
