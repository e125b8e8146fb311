#pragma once

#include <cstdint>
#include <vector>

#include "biteweight/types.hpp"
#include "json.hpp"

namespace biteweight::synthetic {

/// Knobs of the synthetic meal generator. Marginals default to the
/// statistics of the reference recordings; session length is shrunk by
/// desk_scale so a full evaluation runs in seconds.
struct Profile {
    double weight_mean_g = 10.89;
    double weight_std_g = 6.04;
    double weight_min_g = 0.0;
    double weight_max_g = 34.0;

    double session_mean_min = 23.42;
    double session_std_min = 12.15;
    double desk_scale = 0.2;
    int bites_per_session = 30;

    double bite_mean_s = 6.45;
    double bite_std_s = 3.41;
    double bite_min_s = 1.61;
    double bite_max_s = 27.19;

    double raw_rate_mean_hz = 51.84;
    double raw_rate_std_hz = 1.08;
    double jitter_fraction = 0.1;  // of one sample period

    // Strength of the weight -> (gathering duration, transport steadiness)
    // coupling; 0 makes every signal independent of weight.
    double coupling = 1.0;
    double noise = 1.0;

    double left_wrist_fraction = 0.2;
    double max_sync_offset_s = 2.0;
    double missed_mouth_rate = 0.03;  // bites whose mouth windows are mislabeled
};

void to_json(nlohmann::json& j, const Profile& p);
void from_json(const nlohmann::json& j, Profile& p);

/// Deterministic per (subjects, seed, profile). Sessions are returned as
/// load_session would return them: IMU and micromovement timestamps already
/// carry the sync offset. Throws InvalidProfile.
std::vector<Session> generate(int subjects, std::uint64_t seed, const Profile& profile = {});

}  // namespace biteweight::synthetic
