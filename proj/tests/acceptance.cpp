// Acceptance suite: one PASS/FAIL line per criterion, with runtime.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "biteweight/behavioral_features.hpp"
#include "biteweight/cli.hpp"
#include "biteweight/error.hpp"
#include "biteweight/evaluation.hpp"
#include "biteweight/mirtchouk.hpp"
#include "biteweight/pipeline.hpp"
#include "biteweight/preprocess.hpp"
#include "biteweight/regression.hpp"
#include "biteweight/statistical_features.hpp"
#include "biteweight/stats.hpp"
#include "biteweight/synthetic.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace biteweight;
namespace fs = std::filesystem;

namespace {

// Collects failed checks of one criterion.
struct Checker {
    std::vector<std::string> failures;
    void operator()(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "biteweight");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code != 0) std::cerr << err.str();
    return code;
}

// ---------------------------------------------------------------------------

void improvement_formula(Checker& check) {
    const double a = evaluation::improvement_pct(4.83, 3.99);
    check(std::abs(a - 17.39) <= 0.10, "improvement(4.83, 3.99) = " + num(a) + ", want 17.39 +- 0.10");
    const double b = evaluation::improvement_pct(4.83, 6.22);
    check(std::abs(b - (-28.78)) <= 0.15, "improvement(4.83, 6.22) = " + num(b) + ", want -28.78 +- 0.15");
}

void preprocessing_suite(Checker& check) {
    using namespace preprocess;
    const auto filter = design_highpass(1.0, 501, 100.0);

    const auto dc = filtfilt(filter, std::vector<double>(3000, 9.81));
    double worst = 0.0;
    for (double v : dc) worst = std::max(worst, std::abs(v));
    check(worst <= 1e-6, "DC rejection: max |out| = " + num(worst));

    std::vector<double> x(4000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * 5.0 * static_cast<double>(i) / 100.0);
    const auto y = filtfilt(filter, x);
    double peak = 0.0;
    for (std::size_t i = 1000; i < 3000; ++i) peak = std::max(peak, std::abs(y[i]));
    check(peak >= 0.96 && peak <= 1.04, "5 Hz amplitude " + num(peak));
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
    check(std::abs(best_lag) <= 1, "5 Hz phase shift " + std::to_string(best_lag) + " samples");

    check(median_filter(std::vector<double>{0, 0, 10, 0, 0, 0, 0}, 5) == std::vector<double>(7, 0.0), "spike removal");
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> noise(50);
    for (auto& v : noise) v = u(rng);
    check(median_filter(noise, 5) == oracle::median(noise, 5), "median vs brute-force oracle");

    ImuStream left = fixture::stream(100.0, 1.0, [&](double, std::size_t) { return u(rng); }, Wrist::Left);
    auto once = mirror_hand(left).stream;
    check(once.samples[3].values[0] == -left.samples[3].values[0], "mirror negates ax");
    once.wrist = Wrist::Left;
    const auto twice = mirror_hand(once).stream;
    bool same = true;
    for (std::size_t k = 0; k < left.size(); ++k) same = same && twice.samples[k].values == left.samples[k].values;
    check(same, "mirror involution");

    // Continuous piecewise-linear signal with knots every 0.5 s (on the 50 Hz grid).
    const auto pwl = [](double t, std::size_t c) {
        double v = 0.0;
        for (int knot = 0; knot < 20; ++knot) {
            const double slope = std::sin(1.7 * knot + static_cast<double>(c)) * 3.0;
            v += slope * std::clamp(t - 0.5 * knot, 0.0, 0.5);
        }
        return v;
    };
    const auto pl = fixture::stream(50.0, 10.0, pwl);
    const auto out = resample_linear(pl, 100.0);
    check(out.size() == 1001, "resampled length " + std::to_string(out.size()));
    double err = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double t = static_cast<double>(k) / 100.0;
        for (std::size_t c = 0; c < kChannelCount; ++c) err = std::max(err, std::abs(out.samples[k].values[c] - pwl(t, c)));
    }
    check(err <= 1e-12, "piecewise-linear resampling error " + num(err));
}

void feature_oracles(Checker& check) {
    using namespace behavioral;
    const auto pick = [](std::size_t i, double p, Gesture rest = Gesture::None) {
        auto w = fixture::window(i, p, 0, 0, 0, 0);
        w.probs[static_cast<std::size_t>(rest)] += 1.0 - p;
        return w;
    };
    const std::vector<MicromovementWindow> bridged = {pick(0, 0.6), pick(1, 0.6), pick(2, 0.3), pick(3, 0.6),
                                                      pick(4, 0.6), pick(5, 0.1, Gesture::Upward),
                                                      pick(6, 0.1, Gesture::Upward), pick(7, 0.1, Gesture::Mouth)};
    const double f1 = gathering_duration(bridged, first_mouth_window(bridged));
    check(std::abs(f1 - 0.5) <= 1e-12, "gap-bridging f1 = " + num(f1) + ", want 0.5");

    std::vector<MicromovementWindow> weak;
    for (std::size_t i = 0; i < 6; ++i) weak.push_back(pick(i, 0.1, Gesture::Upward));
    weak.push_back(pick(6, 0.1, Gesture::Mouth));
    check(gathering_duration(weak, 6) == 0.0, "no qualifying pick gives f1 = 0");

    const std::vector<MicromovementWindow> split = {pick(0, 0.6), pick(1, 0.6), pick(2, 0.3), pick(3, 0.3),
                                                    pick(4, 0.3), pick(5, 0.6), pick(6, 0.6),
                                                    pick(7, 0.1, Gesture::Mouth)};
    const double f1_split = gathering_duration(split, 7);
    check(std::abs(f1_split - 0.2) <= 1e-12, "three-window gap f1 = " + num(f1_split) + ", want 0.2");

    const double top = stillness_score(normalize_segment(0, 34, 0.0));
    check(std::abs(top - (1.0 + std::log(2.0))) <= 1e-12, "f2 maximum " + num(top));
    TransportSegment flat;
    flat.v_norm = normalize_segment(0, 0, 10.0).v_norm;
    check(stillness_score(flat) == 0.0, "f2 minimum");
    const double mid = stillness_score(normalize_segment(0, 16, 5.5));
    const double mid_oracle = 0.5 + std::log1p(17.0 / 35.0);
    check(std::abs(mid - mid_oracle) <= 1e-6, "f2 mid " + num(mid) + " vs " + num(mid_oracle));
    check(std::round(mid * 1e4) / 1e4 == 0.8959, "f2 mid rounds to 0.8959");

    const std::vector<double> e = {1, 2, 3, 4, 10};
    const double g1 = stats::skewness(e);
    check(std::abs(g1 - 1.1384) <= 1e-4, "skewness " + num(g1));
    check(std::abs(g1 - oracle::skewness(e)) <= 1e-12, "skewness vs moment oracle");

    std::vector<double> spread;
    for (int i = 0; i < 16; ++i) spread.push_back(i);
    const double hmax = statistical::histogram_entropy(spread, 16);
    check(std::abs(hmax - std::log(16.0)) <= 1e-12, "entropy max " + num(hmax));
    check(statistical::histogram_entropy(std::vector<double>(50, 3.0), 16) == 0.0, "entropy min");
}

void svr_solver(Checker& check) {
    using namespace regression;
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> rows(2, 5), cols(1, 2);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rows(rng), d = cols(rng);
        Matrix x(n, d);
        Vector y(n);
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
        for (Eigen::Index i = 0; i < n; ++i) y(i) = u(rng);
        const auto sol = solve_linear_svr(x, y);
        const double obj = svr_primal_objective(x, y, sol.w, sol.b, 1.01, 0.016);
        const auto grid = oracle::svr_grid(x, y, 1.01, 0.016);
        check(obj <= grid.objective + 1e-4,
              "instance " + std::to_string(trial) + ": objective " + num(obj) + " > grid " + num(grid.objective));
    }
    Matrix x(2, 1);
    x << 0, 1;
    Vector y(2);
    y << 0, 1;
    const auto sol = solve_linear_svr(x, y);
    check(std::abs(sol.w(0) - 0.968) <= 1e-3, "two-point w = " + num(sol.w(0)));
    check(std::abs(sol.b - 0.016) <= 1e-3, "two-point b = " + num(sol.b));
}

void loso_integrity(Checker& check) {
    synthetic::Profile profile;
    profile.bites_per_session = 8;
    const auto sessions = pipeline::preprocess_all(synthetic::generate(10, 7, profile));
    for (auto kind : {pipeline::Kind::Proposed, pipeline::Kind::Mirtchouk, pipeline::Kind::Baseline}) {
        const auto out = pipeline::evaluate_loso(sessions, kind);
        const auto leaks = evaluation::audit_fold_manifest(out.fold_manifest);
        check(leaks == 0, pipeline::to_string(kind) + " manifest leaks " + std::to_string(leaks) + " bites");
        check(out.fold_manifest["folds"].size() == 10, pipeline::to_string(kind) + " fold count");
    }

    std::mt19937 rng(77);
    std::uniform_int_distribution<int> models(1, 4), size(0, 30), key(0, 40);
    for (int trial = 0; trial < 100; ++trial) {
        std::map<std::string, std::set<std::string>> sets;
        const int m = models(rng);
        for (int i = 0; i < m; ++i) {
            auto& s = sets["model" + std::to_string(i)];
            const int k = size(rng);
            for (int j = 0; j < k; ++j) s.insert("S" + std::to_string(key(rng) % 5) + "/meal/b" + std::to_string(key(rng)));
        }
        const auto expected = oracle::intersect(sets);
        try {
            const auto got = evaluation::common_subset(sets);
            check(got == expected, "common subset mismatch in case " + std::to_string(trial));
        } catch (const biteweight::Error& e) {
            check(e.code() == ErrorCode::EmptyIntersection && expected.empty(),
                  "unexpected error in case " + std::to_string(trial));
        }
    }
}

void end_to_end(Checker& check) {
    const auto root = fixture::temp_dir("acceptance_e2e");
    const std::vector<std::string> base = {"evaluate", "--synth", "--subjects", "10", "--seed", "7", "--pipeline", "proposed"};
    auto args = [&](const std::string& dir, std::vector<std::string> extra = {}) {
        auto a = base;
        a.push_back("--out");
        a.push_back((root / dir).string());
        a.insert(a.end(), extra.begin(), extra.end());
        return a;
    };
    check(cli(args("run1")) == 0, "first run exit code");
    check(cli(args("run2")) == 0, "second run exit code");
    check(cli(args("flat", {"--coupling", "0"})) == 0, "coupling 0 exit code");

    const auto m1 = slurp(root / "run1" / "metrics_proposed.json");
    const auto m2 = slurp(root / "run2" / "metrics_proposed.json");
    check(!m1.empty() && m1 == m2, "metric JSONs differ between identical runs");

    const auto coupled = nlohmann::json::parse(m1)["improvement_pct"].get<double>();
    check(coupled > 10.0, "default coupling improvement " + num(coupled) + " %");
    const auto flat = nlohmann::json::parse(slurp(root / "flat" / "metrics_proposed.json"))["improvement_pct"].get<double>();
    check(std::abs(flat) < 5.0, "zero coupling improvement " + num(flat) + " %");
    std::cout << "    improvement: coupling 1 -> " << num(coupled) << " %, coupling 0 -> " << num(flat) << " %\n";
}

void mirtchouk_shapes(Checker& check) {
    const auto sessions = pipeline::preprocess_all(synthetic::generate(10, 7));
    const auto records = pipeline::extract(sessions, pipeline::Kind::Mirtchouk);
    std::size_t bad = 0;
    for (const auto& r : records) bad += (r.usable && r.features.size() == mirtchouk::kBiteFeatureCount) ? 0 : 1;
    check(bad == 0, std::to_string(bad) + " bites without 56 features");
    check(records.size() == 300, "bite count " + std::to_string(records.size()));

    const double q[] = {0.7, -2.0, 3.5, 1.25, -0.8};
    std::vector<double> y(500);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double t = static_cast<double>(i) / 499.0;
        y[i] = q[0] + t * (q[1] + t * (q[2] + t * (q[3] + t * q[4])));
    }
    const auto c = mirtchouk::fit_quartic(y);
    double err = 0.0;
    for (std::size_t k = 0; k < 5; ++k) err = std::max(err, std::abs(c[k] - q[k]));
    check(err <= 1e-6, "quartic recovery error " + num(err));

    regression::Matrix x(60, static_cast<Eigen::Index>(mirtchouk::kBiteFeatureCount));
    std::mt19937 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
    const auto flat = regression::fit_forest(x, regression::Vector::Constant(60, 7.0));
    const regression::Vector pf = regression::predict_forest(flat, x);
    check((pf.array() == 7.0).all(), "constant-target forest");

    regression::Vector yv(60);
    for (Eigen::Index i = 0; i < 60; ++i) yv(i) = x(i, 0) + 0.5 * x(i, 3) * x(i, 7) + 0.1 * n(rng);
    const regression::Vector a = regression::predict_forest(regression::fit_forest(x, yv), x);
    const regression::Vector b = regression::predict_forest(regression::fit_forest(x, yv), x);
    check(std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0,
          "seeded forests differ");
}

struct Criterion {
    const char* name;
    double limit_s;
    std::function<void(Checker&)> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"improvement formula reproduction", 1.0, improvement_formula},
        {"preprocessing suite", 10.0, preprocessing_suite},
        {"feature oracles", 5.0, feature_oracles},
        {"SVR solver correctness", 30.0, svr_solver},
        {"LOSO integrity", 5.0, loso_integrity},
        {"end-to-end synthetic experiment", 60.0, end_to_end},
        {"Mirtchouk pipeline shape checks", 20.0, mirtchouk_shapes},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Checker check;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(check);
        } catch (const std::exception& e) {
            check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        check(secs < c.limit_s, "runtime " + num(secs) + " s over the " + num(c.limit_s) + " s limit");
        const bool ok = check.failures.empty();
        failed += ok ? 0 : 1;
        std::printf("%s  %-34s %7.3f s (limit %g s)\n", ok ? "PASS" : "FAIL", c.name, secs, c.limit_s);
        for (const auto& f : check.failures) std::printf("      - %s\n", f.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
