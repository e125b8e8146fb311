#include "biteweight/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "biteweight/error.hpp"

namespace biteweight::preprocess {

double FirFilter::gain_at(double hz) const {
    const double omega = 2.0 * std::numbers::pi * hz / fs;
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t n = 0; n < taps.size(); ++n) {
        acc += taps[n] * std::polar(1.0, -omega * static_cast<double>(n));
    }
    return std::abs(acc);
}

namespace {

bool on_uniform_grid(const ImuStream& stream, double target_hz) {
    const double t0 = stream.samples.front().t;
    for (std::size_t k = 0; k < stream.samples.size(); ++k) {
        if (std::abs(stream.samples[k].t - (t0 + static_cast<double>(k) / target_hz)) > 1e-9) return false;
    }
    return true;
}

// Causal FIR pass; samples before the start are taken equal to x[0].
std::vector<double> fir_pass(const std::vector<double>& taps, const std::vector<double>& x) {
    const std::size_t n = x.size();
    const std::size_t m = taps.size();
    // tail[j] = sum of taps[j..m)
    std::vector<double> tail(m + 1, 0.0);
    for (std::size_t j = m; j-- > 0;) tail[j] = tail[j + 1] + taps[j];
    std::vector<double> y(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        const std::size_t direct = std::min(m, k + 1);
        for (std::size_t j = 0; j < direct; ++j) acc += taps[j] * x[k - j];
        y[k] = acc + tail[direct] * x[0];
    }
    return y;
}

}  // namespace

ImuStream resample_linear(const ImuStream& stream, double target_hz) {
    if (!(target_hz > 0.0)) throw Error(ErrorCode::InvalidParams, "target rate must be positive");
    if (stream.samples.size() < 2) {
        throw Error(ErrorCode::TooFewSamples, "resampling needs at least 2 samples, got " +
                                                  std::to_string(stream.samples.size()));
    }
    if (on_uniform_grid(stream, target_hz)) {
        ImuStream copy = stream;
        copy.fs = target_hz;
        return copy;
    }

    const auto& in = stream.samples;
    const double t0 = in.front().t;
    const double t_last = in.back().t;
    const auto count = static_cast<std::size_t>(std::floor((t_last - t0) * target_hz + 1e-9)) + 1;

    ImuStream out;
    out.fs = target_hz;
    out.wrist = stream.wrist;
    out.samples.reserve(count);
    std::size_t j = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double t = std::min(t0 + static_cast<double>(k) / target_hz, t_last);
        while (j + 2 < in.size() && in[j + 1].t < t) ++j;
        const auto& a = in[j];
        const auto& b = in[j + 1];
        const double frac = (t - a.t) / (b.t - a.t);
        ImuSample s;
        s.t = t;
        for (std::size_t c = 0; c < kChannelCount; ++c) {
            s.values[c] = a.values[c] + (b.values[c] - a.values[c]) * frac;
        }
        out.samples.push_back(s);
    }
    return out;
}

FirFilter design_highpass(double cutoff_hz, int num_taps, double fs) {
    if (num_taps < 3 || num_taps % 2 == 0) {
        throw Error(ErrorCode::InvalidParams, "tap count must be odd and >= 3, got " + std::to_string(num_taps));
    }
    if (!(fs > 0.0) || !(cutoff_hz > 0.0) || !(cutoff_hz < fs / 2.0)) {
        throw Error(ErrorCode::InvalidParams, "cutoff must lie in (0, fs/2)");
    }

    const auto n = static_cast<std::size_t>(num_taps);
    const double center = static_cast<double>(n - 1) / 2.0;
    const double fc = cutoff_hz / fs;  // cycles per sample

    std::vector<double> lowpass(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double k = static_cast<double>(i) - center;
        const double sinc = k == 0.0 ? 2.0 * fc : std::sin(2.0 * std::numbers::pi * fc * k) / (std::numbers::pi * k);
        const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                                     static_cast<double>(n - 1));
        lowpass[i] = sinc * window;
        sum += lowpass[i];
    }

    FirFilter filter;
    filter.cutoff_hz = cutoff_hz;
    filter.fs = fs;
    filter.taps.resize(n);
    for (std::size_t i = 0; i < n; ++i) filter.taps[i] = -lowpass[i] / sum;
    filter.taps[n / 2] += 1.0;
    // Symmetrize against rounding so the filter is exactly linear phase.
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double avg = 0.5 * (filter.taps[i] + filter.taps[n - 1 - i]);
        filter.taps[i] = filter.taps[n - 1 - i] = avg;
    }
    return filter;
}

std::vector<double> filtfilt(const FirFilter& filter, std::span<const double> x) {
    const std::size_t n = x.size();
    const std::size_t pad = 3 * (filter.taps.size() - 1);
    if (n <= pad) {
        throw Error(ErrorCode::StreamTooShort, "filtfilt needs more than " + std::to_string(pad) +
                                                   " samples, got " + std::to_string(n));
    }

    std::vector<double> ext(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) ext[i] = 2.0 * x[0] - x[pad - i];
    std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));
    for (std::size_t i = 0; i < pad; ++i) ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];

    auto forward = fir_pass(filter.taps, ext);
    std::reverse(forward.begin(), forward.end());
    auto backward = fir_pass(filter.taps, forward);
    std::reverse(backward.begin(), backward.end());

    return {backward.begin() + static_cast<std::ptrdiff_t>(pad),
            backward.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

ImuStream filtfilt(const FirFilter& filter, const ImuStream& stream, std::span<const Channel> channels) {
    ImuStream out = stream;
    for (Channel c : channels) {
        const auto filtered = filtfilt(filter, stream.channel(c));
        for (std::size_t i = 0; i < filtered.size(); ++i) out.samples[i][c] = filtered[i];
    }
    return out;
}

std::vector<double> median_filter(std::span<const double> x, int order) {
    if (order < 1 || order % 2 == 0) {
        throw Error(ErrorCode::InvalidOrder, "median order must be odd and positive, got " + std::to_string(order));
    }
    const std::size_t n = x.size();
    const auto half = static_cast<std::size_t>(order / 2);
    std::vector<double> out(n);
    std::vector<double> window;
    window.reserve(static_cast<std::size_t>(order));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t h = std::min({half, i, n - 1 - i});
        window.assign(x.begin() + static_cast<std::ptrdiff_t>(i - h), x.begin() + static_cast<std::ptrdiff_t>(i + h + 1));
        auto mid = window.begin() + static_cast<std::ptrdiff_t>(h);
        std::nth_element(window.begin(), mid, window.end());
        out[i] = *mid;
    }
    return out;
}

ImuStream median_filter(const ImuStream& stream, int order) {
    ImuStream out = stream;
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        const auto filtered = median_filter(stream.channel(static_cast<Channel>(c)), order);
        for (std::size_t i = 0; i < filtered.size(); ++i) out.samples[i].values[c] = filtered[i];
    }
    return out;
}

MirrorResult mirror_hand(const ImuStream& stream) {
    MirrorResult result{stream, MirrorOutcome::Mirrored};
    if (stream.wrist == Wrist::Right) {
        result.outcome = MirrorOutcome::AlreadyRight;
        return result;
    }
    for (auto& s : result.stream.samples) {
        s[Channel::Ax] = -s[Channel::Ax];
        s[Channel::Gy] = -s[Channel::Gy];
        s[Channel::Gz] = -s[Channel::Gz];
    }
    result.stream.wrist = Wrist::Right;
    return result;
}

Session preprocess_session(const Session& session, const PreprocessConfig& config) {
    Session out = session;
    auto stream = resample_linear(session.imu, config.target_hz);
    const auto filter = design_highpass(config.highpass_cutoff_hz, config.highpass_taps, config.target_hz);
    stream = filtfilt(filter, stream, kAccelChannels);
    stream = median_filter(stream, config.median_order);
    out.imu = mirror_hand(stream).stream;
    return out;
}

}  // namespace biteweight::preprocess
