#include "biteweight/session.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "biteweight/error.hpp"

namespace biteweight {

namespace {

constexpr double kTimeTol = 1e-9;
constexpr double kWindowStep = 0.1;
constexpr double kWindowLength = 0.2;

[[noreturn]] void violation(const Session& s, const std::string& what) {
    throw Error(ErrorCode::InvariantViolation, "session " + s.session_id + ": " + what);
}

}  // namespace

Gesture MicromovementWindow::argmax() const {
    const double mouth = prob(Gesture::Mouth);
    std::size_t best = 0;
    for (std::size_t g = 1; g < kGestureCount; ++g) {
        if (probs[g] > probs[best]) best = g;
    }
    if (mouth >= probs[best]) return Gesture::Mouth;
    return static_cast<Gesture>(best);
}

void validate_session(const Session& session) {
    const auto& samples = session.imu.samples;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i].t)) violation(session, "non-finite IMU time at sample " + std::to_string(i));
        for (double v : samples[i].values) {
            if (!std::isfinite(v)) violation(session, "non-finite IMU value at sample " + std::to_string(i));
        }
        if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
            violation(session, "IMU times not strictly increasing at sample " + std::to_string(i));
        }
    }

    const auto& windows = session.micromovements;
    for (std::size_t k = 0; k < windows.size(); ++k) {
        const auto& w = windows[k];
        double sum = 0.0;
        for (double p : w.probs) {
            if (!(p >= 0.0 && p <= 1.0)) violation(session, "probability outside [0,1] in window " + std::to_string(k));
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-3) violation(session, "probabilities do not sum to 1 in window " + std::to_string(k));
        if (k > 0) {
            if (w.index != windows[k - 1].index + 1) violation(session, "window indices not consecutive at " + std::to_string(k));
            if (std::abs(w.t_start - windows[k - 1].t_start - kWindowStep) > 1e-6) {
                violation(session, "windows not 0.1 s apart at " + std::to_string(k));
            }
        }
    }

    for (std::size_t b = 0; b < session.bites.size(); ++b) {
        const auto& bite = session.bites[b];
        if (!(bite.start_s < bite.end_s)) violation(session, "bite " + bite.bite_id + " has end <= start");
        if (!(bite.weight_g >= 0.0)) violation(session, "bite " + bite.bite_id + " has negative weight");
        if (b > 0) {
            const auto& prev = session.bites[b - 1];
            if (bite.start_s < prev.end_s) violation(session, "bite " + bite.bite_id + " overlaps or is out of order");
            if (bite.bite_id == prev.bite_id) violation(session, "duplicate bite id " + bite.bite_id);
        }
        if (samples.empty() || bite.start_s < samples.front().t - kTimeTol || bite.end_s > samples.back().t + kTimeTol) {
            violation(session, "bite " + bite.bite_id + " lies outside the IMU time span");
        }
    }
}

std::size_t first_sample_at_or_after(const ImuStream& imu, double t) {
    auto it = std::lower_bound(imu.samples.begin(), imu.samples.end(), t - kTimeTol,
                               [](const ImuSample& s, double v) { return s.t < v; });
    return static_cast<std::size_t>(it - imu.samples.begin());
}

BiteSlice slice_bite(const Session& session, const BiteAnnotation& bite) {
    BiteSlice slice;
    slice.bite = bite;
    slice.imu.fs = session.imu.fs;
    slice.imu.wrist = session.imu.wrist;

    const auto& samples = session.imu.samples;
    auto first = first_sample_at_or_after(session.imu, bite.start_s);
    auto last = std::upper_bound(samples.begin(), samples.end(), bite.end_s + kTimeTol,
                                 [](double v, const ImuSample& s) { return v < s.t; });
    if (first < static_cast<std::size_t>(last - samples.begin())) {
        slice.imu.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(first), last);
    }

    for (const auto& w : session.micromovements) {
        if (w.t_start + kWindowLength >= bite.start_s - kTimeTol && w.t_start <= bite.end_s + kTimeTol) {
            auto copy = w;
            copy.index = slice.windows.size();
            slice.windows.push_back(copy);
        }
    }
    return slice;
}

BiteSlice slice_bite(const Session& session, std::string_view bite_id) {
    for (const auto& b : session.bites) {
        if (b.bite_id == bite_id) return slice_bite(session, b);
    }
    throw Error(ErrorCode::UnknownBite, std::string(bite_id));
}

}  // namespace biteweight
