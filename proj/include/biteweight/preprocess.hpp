#pragma once

#include <span>
#include <vector>

#include "biteweight/config.hpp"
#include "biteweight/types.hpp"

namespace biteweight::preprocess {

struct FirFilter {
    std::vector<double> taps;
    double cutoff_hz = 0.0;
    double fs = 0.0;

    /// Magnitude of the frequency response at `hz`.
    double gain_at(double hz) const;
};

/// Linear interpolation onto the uniform grid t0 + k / target_hz covering
/// [first, last] input time. A stream already on that grid is returned as is.
ImuStream resample_linear(const ImuStream& stream, double target_hz);

/// Hamming-windowed sinc low-pass turned high-pass by spectral inversion.
FirFilter design_highpass(double cutoff_hz, int num_taps, double fs);

/// Zero-phase forward-backward FIR filtering of one channel. The signal is
/// extended by odd reflection of length 3 * (taps - 1) on each side, and
/// each pass starts from the steady state of its first input value.
std::vector<double> filtfilt(const FirFilter& filter, std::span<const double> x);
ImuStream filtfilt(const FirFilter& filter, const ImuStream& stream, std::span<const Channel> channels);

/// Centered running median. Near the edges the window shrinks symmetrically
/// so it stays centered and odd-sized.
std::vector<double> median_filter(std::span<const double> x, int order);
ImuStream median_filter(const ImuStream& stream, int order = 5);

enum class MirrorOutcome { Mirrored, AlreadyRight };

struct MirrorResult {
    ImuStream stream;
    MirrorOutcome outcome = MirrorOutcome::Mirrored;
};

/// Left-to-right wrist mapping: negates ax, gy and gz.
MirrorResult mirror_hand(const ImuStream& stream);

inline constexpr Channel kAccelChannels[] = {Channel::Ax, Channel::Ay, Channel::Az};

/// resample -> high-pass accelerometer -> median all channels -> mirror if left.
Session preprocess_session(const Session& session, const PreprocessConfig& config = {});

}  // namespace biteweight::preprocess
