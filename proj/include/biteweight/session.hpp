#pragma once

#include <string_view>
#include <vector>

#include "biteweight/types.hpp"

namespace biteweight {

/// Throws InvariantViolation describing the first broken invariant.
void validate_session(const Session& session);

struct BiteSlice {
    BiteAnnotation bite;
    ImuStream imu;
    std::vector<MicromovementWindow> windows;  // re-indexed from zero
};

// Closed interval on both ends: samples with start <= t <= end, windows whose
// [t_start, t_start + 0.2] span intersects [start, end].
BiteSlice slice_bite(const Session& session, const BiteAnnotation& bite);
BiteSlice slice_bite(const Session& session, std::string_view bite_id);

/// Index of the first IMU sample at or after `t` (with a 1e-9 s tolerance).
std::size_t first_sample_at_or_after(const ImuStream& imu, double t);

}  // namespace biteweight
