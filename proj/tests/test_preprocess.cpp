#include <numbers>
#include <random>

#include "biteweight/error.hpp"
#include "biteweight/preprocess.hpp"
#include "biteweight/synthetic.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace biteweight;
using namespace biteweight::preprocess;

namespace {

ImuStream raw_stream(std::vector<double> times, std::vector<double> values) {
    ImuStream s;
    for (std::size_t i = 0; i < times.size(); ++i) {
        ImuSample smp;
        smp.t = times[i];
        smp.values.fill(values[i]);
        s.samples.push_back(smp);
    }
    s.fs = 50.0;
    return s;
}

std::vector<double> sine(std::size_t n, double hz, double fs) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / fs);
    return x;
}

}  // namespace

TEST_CASE("resampling preserves constants") {
    const auto in = fixture::stream(50.0, 4.0, [](double, std::size_t) { return 5.0; });
    const auto out = resample_linear(in, 100.0);
    CHECK(out.fs == 100.0);
    CHECK(out.size() == 401);
    for (const auto& s : out.samples) {
        for (double v : s.values) CHECK(v == 5.0);
    }
}

TEST_CASE("resampling reproduces linear data") {
    const auto out = resample_linear(raw_stream({0, 0.02, 0.04}, {0, 1, 2}), 100.0);
    REQUIRE(out.size() == 5);
    const double expected[] = {0, 0.5, 1, 1.5, 2};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(out.samples[i].t == doctest::Approx(0.01 * static_cast<double>(i)).epsilon(1e-12));
        CHECK(out.samples[i].values[0] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
}

TEST_CASE("resampling of jittered generator data matches the interpolation oracle") {
    synthetic::Profile profile;
    profile.bites_per_session = 3;
    const auto session = synthetic::generate(2, 7, profile).front();
    const auto& raw = session.imu;
    CHECK(raw.fs == doctest::Approx(51.84).epsilon(0.05));
    const auto out = resample_linear(raw, 100.0);
    std::vector<double> t;
    for (const auto& s : raw.samples) t.push_back(s.t);
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        const auto v = raw.channel(static_cast<Channel>(c));
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double expected_t = raw.samples.front().t + static_cast<double>(k) / 100.0;
            REQUIRE(std::abs(out.samples[k].t - expected_t) <= 1e-9);
            REQUIRE(std::abs(out.samples[k].values[c] - oracle::interpolate(t, v, out.samples[k].t)) <= 1e-12);
        }
    }
}

TEST_CASE("resampling rejects degenerate input") {
    CHECK_THROWS_AS(resample_linear(ImuStream{}, 100.0), Error);
    try {
        resample_linear(ImuStream{}, 100.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewSamples);
    }
}

TEST_CASE("high-pass design") {
    const auto f = design_highpass(1.0, 501, 100.0);
    CHECK(f.taps.size() == 501);
    CHECK(f.gain_at(0.0) <= 1e-6);
    CHECK(f.gain_at(5.0) >= 0.98);
    CHECK(f.gain_at(5.0) <= 1.02);
    for (std::size_t i = 0; i < f.taps.size(); ++i) CHECK(f.taps[i] == f.taps[f.taps.size() - 1 - i]);
    try {
        design_highpass(1.0, 500, 100.0);
        FAIL("even taps accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidParams);
    }
}

TEST_CASE("filtfilt removes a constant offset") {
    const auto f = design_highpass(1.0, 501, 100.0);
    const std::vector<double> x(3000, 9.81);
    const auto y = filtfilt(f, x);
    double worst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(y[i]));
    CHECK(worst <= 1e-6);
}

TEST_CASE("filtfilt keeps a 5 Hz sinusoid in phase") {
    const auto f = design_highpass(1.0, 501, 100.0);
    const auto x = sine(4000, 5.0, 100.0);
    const auto y = filtfilt(f, x);
    // Interior amplitude.
    double peak = 0.0;
    for (std::size_t i = 1000; i < 3000; ++i) peak = std::max(peak, std::abs(y[i]));
    CHECK(peak >= 0.96);
    CHECK(peak <= 1.04);
    // Cross-correlation peak lag against the analytic reference.
    int best_lag = 99;
    double best = -1e300;
    for (int lag = -10; lag <= 10; ++lag) {
        double acc = 0.0;
        for (int i = 1000; i < 3000; ++i) acc += y[static_cast<std::size_t>(i + lag)] * x[static_cast<std::size_t>(i)];
        if (acc > best) {
            best = acc;
            best_lag = lag;
        }
    }
    CHECK(std::abs(best_lag) <= 1);
}

TEST_CASE("filtfilt rejects short streams") {
    const auto f = design_highpass(1.0, 501, 100.0);
    try {
        filtfilt(f, std::vector<double>(60, 1.0));
        FAIL("short stream accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::StreamTooShort);
    }
}

TEST_CASE("median filter") {
    CHECK(median_filter(std::vector<double>{0, 0, 10, 0, 0, 0, 0}, 5) == std::vector<double>(7, 0.0));

    std::vector<double> ramp(20);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.5 * static_cast<double>(i);
    const auto r = median_filter(ramp, 5);
    for (std::size_t i = 2; i + 2 < ramp.size(); ++i) CHECK(r[i] == ramp[i]);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(50);
    for (auto& v : x) v = u(rng);
    CHECK(median_filter(x, 5) == oracle::median(x, 5));

    try {
        median_filter(x, 4);
        FAIL("even order accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidOrder);
    }
}

TEST_CASE("mirroring") {
    ImuStream s;
    s.wrist = Wrist::Left;
    s.fs = 100.0;
    ImuSample smp;
    smp.values = {1, 2, 3, 4, 5, 6};
    s.samples.push_back(smp);
    const auto m = mirror_hand(s);
    CHECK(m.outcome == MirrorOutcome::Mirrored);
    CHECK(m.stream.wrist == Wrist::Right);
    CHECK(m.stream.samples[0].values == std::array<double, 6>{-1, 2, 3, 4, -5, -6});

    auto again = m.stream;
    again.wrist = Wrist::Left;
    CHECK(mirror_hand(again).stream.samples[0].values == s.samples[0].values);

    s.wrist = Wrist::Right;
    const auto r = mirror_hand(s);
    CHECK(r.outcome == MirrorOutcome::AlreadyRight);
    CHECK(r.stream.samples[0].values == s.samples[0].values);
}

TEST_CASE("full chain on a left-wrist 51.8 Hz recording") {
    std::mt19937 rng(11);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    Session session;
    session.subject_id = "S01";
    session.imu.wrist = Wrist::Left;
    const double period = 1.0 / 51.8;
    for (int k = 0; k < 51.8 * 40; ++k) {
        ImuSample s;
        s.t = (k + (k > 0 ? jitter(rng) : 0.0)) * period;
        s.values = {0.4 + noise(rng), -1.1 + noise(rng), 9.81 + noise(rng), noise(rng), noise(rng), noise(rng)};
        session.imu.samples.push_back(s);
    }
    session.imu.fs = 51.8;
    const auto out = preprocess_session(session);
    CHECK(out.imu.wrist == Wrist::Right);
    CHECK(out.imu.fs == 100.0);
    for (std::size_t k = 1; k < out.imu.size(); ++k) {
        CHECK(out.imu.samples[k].t - out.imu.samples[k - 1].t == doctest::Approx(0.01));
    }
    for (Channel c : kAccelChannels) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t k = 500; k + 500 < out.imu.size(); ++k, ++n) sum += std::abs(out.imu.samples[k][c]);
        CHECK(sum / static_cast<double>(n) < 0.05);
    }
}

TEST_CASE("already uniform right-wrist input only gets filtered") {
    const auto in = fixture::stream(100.0, 20.0, [](double t, std::size_t c) {
        return std::sin(7.0 * t + static_cast<double>(c)) + 0.3 * static_cast<double>(c);
    });
    Session session;
    session.imu = in;
    const auto out = preprocess_session(session);
    const auto f = design_highpass(1.0, 501, 100.0);
    const auto expected = median_filter(filtfilt(f, in, kAccelChannels), 5);
    REQUIRE(out.imu.size() == in.size());
    for (std::size_t k = 0; k < in.size(); ++k) {
        CHECK(out.imu.samples[k].t == in.samples[k].t);
        CHECK(out.imu.samples[k].values == expected.samples[k].values);
    }
}

TEST_CASE("empty IMU") {
    Session session;
    try {
        preprocess_session(session);
        FAIL("empty stream accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewSamples);
    }
}
