#include <random>

#include "biteweight/error.hpp"
#include "biteweight/mirtchouk.hpp"
#include "biteweight/pipeline.hpp"
#include "biteweight/synthetic.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace biteweight;
using namespace biteweight::mirtchouk;

TEST_CASE("constant window") {
    const double level[] = {0.5, -1.0, 9.81, 0.1, 0.2, -0.3};
    const auto bite = fixture::stream(100.0, 5.0, [&](double, std::size_t c) { return level[c]; });
    const auto f = window_features(bite, 0, bite.size());
    for (std::size_t c = 0; c < 6; ++c) CHECK(f[c] == doctest::Approx(level[c]).epsilon(1e-12));
    for (std::size_t k = 6; k < kStatCount; ++k) CHECK(f[k] == 0.0);
    for (std::size_t axis = 0; axis < 3; ++axis) {
        const std::size_t base = kStatCount + axis * 5;
        CHECK(f[base] == doctest::Approx(level[axis]).epsilon(1e-9));
        for (std::size_t k = 1; k < 5; ++k) CHECK(std::abs(f[base + k]) <= 1e-9);
    }
    CHECK(f[26] == 0.0);
    CHECK(f[27] == 0.0);
}

TEST_CASE("quartic recovery") {
    const double q[] = {0.7, -2.0, 3.5, 1.25, -0.8};
    std::vector<double> y(500);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double t = static_cast<double>(i) / 499.0;
        y[i] = q[0] + t * (q[1] + t * (q[2] + t * (q[3] + t * q[4])));
    }
    const auto c = fit_quartic(y);
    for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(c[k] - q[k]) <= 1e-6);

    // Fewer samples than coefficients still interpolate exactly.
    const std::vector<double> three = {1.0, 2.0, 0.5};
    const auto m = fit_quartic(three);
    for (std::size_t i = 0; i < 3; ++i) {
        const double t = i / 2.0;
        CHECK(m[0] + t * (m[1] + t * (m[2] + t * (m[3] + t * m[4]))) == doctest::Approx(three[i]).epsilon(1e-9));
    }
}

TEST_CASE("zero crossing rate") {
    CHECK(zero_crossing_rate(std::vector<double>{1, -1, 1, -1}) == 1.0);
    CHECK(zero_crossing_rate(std::vector<double>{1, 2, 3}) == 0.0);
    CHECK(zero_crossing_rate(std::vector<double>{-1, 0, -1}) == 1.0);
}

TEST_CASE("bite vector moments") {
    WindowFeatures a{}, b{};
    for (std::size_t k = 0; k < kWindowFeatureCount; ++k) a[k] = b[k] = static_cast<double>(k);
    const std::vector<WindowFeatures> same = {a, a};
    const auto v = bite_vector(same);
    for (std::size_t k = 0; k < kWindowFeatureCount; ++k) {
        CHECK(v[k] == a[k]);
        CHECK(v[kWindowFeatureCount + k] == 0.0);
    }
    a[0] = 1.0;
    b[0] = 3.0;
    const std::vector<WindowFeatures> pair = {a, b};
    const auto w = bite_vector(pair);
    CHECK(w[0] == 2.0);
    CHECK(w[kWindowFeatureCount] == 1.0);
    try {
        bite_vector(std::vector<WindowFeatures>{});
        FAIL("no windows accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoWindows);
    }
}

TEST_CASE("8 s bite matches a streaming-moment oracle") {
    std::mt19937 rng(21);
    std::normal_distribution<double> n(0.0, 1.0);
    const auto bite = fixture::stream(100.0, 8.0, [&](double t, std::size_t c) { return std::sin(2.0 * t + c) + 0.2 * n(rng); });
    const auto ws = windows(bite);
    CHECK(ws.size() == (801 - 500) / 10 + 1);
    const auto v = bite_vector(ws);
    for (std::size_t k = 0; k < kWindowFeatureCount; ++k) {
        oracle::Streaming s;
        for (const auto& w : ws) s.push(w[k]);
        CHECK(std::abs(v[k] - static_cast<double>(s.mean)) <= 1e-10 * std::max(1.0, std::abs(v[k])));
        CHECK(std::abs(v[kWindowFeatureCount + k] - s.stddev()) <= 1e-10 * std::max(1.0, std::abs(v[k])));
    }
}

TEST_CASE("every generated bite yields 56 features") {
    synthetic::Profile profile;
    profile.bites_per_session = 10;
    const auto sessions = pipeline::preprocess_all(synthetic::generate(2, 3, profile));
    const auto records = pipeline::extract(sessions, pipeline::Kind::Mirtchouk);
    CHECK(records.size() == 20);
    for (const auto& r : records) {
        CHECK(r.usable);
        CHECK(r.features.size() == kBiteFeatureCount);
    }
    CHECK(feature_names().size() == kBiteFeatureCount);
}

TEST_CASE("short bites use one whole-bite window") {
    const auto bite = fixture::stream(100.0, 1.61, [](double t, std::size_t) { return t; });
    CHECK(windows(bite).size() == 1);
    try {
        windows(ImuStream{});
        FAIL("empty bite accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyBite);
    }
}
