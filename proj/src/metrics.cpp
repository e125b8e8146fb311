#include <algorithm>
#include <cmath>
#include <fstream>

#include "biteweight/csv.hpp"
#include "biteweight/error.hpp"
#include "biteweight/evaluation.hpp"

namespace biteweight::evaluation {

using nlohmann::json;

double improvement_pct(double mae_baseline, double mae_model) {
    return (mae_baseline - mae_model) / mae_baseline * 100.0;
}

ErrorSummary summarize_errors(std::span<const double> predictions, std::span<const double> truths) {
    ErrorSummary s;
    if (predictions.empty()) return s;
    double abs_sum = 0.0, sq_sum = 0.0, pct_sum = 0.0;
    std::size_t pct_n = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = predictions[i] - truths[i];
        abs_sum += std::abs(e);
        sq_sum += e * e;
        if (truths[i] > 0.0) {
            pct_sum += std::abs(e) / truths[i];
            ++pct_n;
        } else {
            ++s.mape_excluded;
        }
    }
    const auto n = static_cast<double>(predictions.size());
    s.mae = abs_sum / n;
    s.mse = sq_sum / n;
    s.mape_pct = pct_n > 0 ? pct_sum / static_cast<double>(pct_n) * 100.0 : 0.0;
    return s;
}

namespace {

struct Entry {
    std::string subject;
    std::string session;
    double prediction = 0.0;
    double truth = 0.0;
};

std::map<std::string, Entry> flatten(std::span<const FoldResult> folds) {
    std::map<std::string, Entry> out;
    for (const auto& f : folds) {
        if (f.predictions.size() != f.truths.size() || f.bite_keys.size() != f.truths.size() ||
            f.session_ids.size() != f.truths.size()) {
            throw Error(ErrorCode::InvariantViolation, "fold " + f.subject_id + " has inconsistent lengths");
        }
        for (std::size_t i = 0; i < f.truths.size(); ++i) {
            const bool inserted =
                out.emplace(f.bite_keys[i], Entry{f.subject_id, f.session_ids[i], f.predictions[i], f.truths[i]})
                    .second;
            if (!inserted) throw Error(ErrorCode::MismatchedBiteSets, "bite " + f.bite_keys[i] + " predicted twice");
        }
    }
    return out;
}

}  // namespace

MetricsReport compute_metrics(std::span<const FoldResult> folds, std::span<const FoldResult> baseline_folds) {
    const auto model = flatten(folds);
    const auto baseline = flatten(baseline_folds);
    if (model.size() != baseline.size() ||
        !std::equal(model.begin(), model.end(), baseline.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; })) {
        throw Error(ErrorCode::MismatchedBiteSets, "model and baseline were evaluated on different bites");
    }
    if (model.empty()) throw Error(ErrorCode::MismatchedBiteSets, "no evaluated bites");

    MetricsReport report;
    report.model_tag = folds.empty() ? std::string{} : folds.front().model_tag;
    const bool is_baseline = report.model_tag == kBaselineTag;

    std::vector<double> pred, truth, base_pred;
    std::map<std::string, std::vector<std::size_t>> by_subject;
    std::map<std::string, std::pair<std::string, double>> by_session;
    for (const auto& [key, e] : model) {
        by_subject[e.subject].push_back(pred.size());
        auto& meal = by_session[e.session];
        meal.first = e.subject;
        meal.second += e.prediction - e.truth;
        pred.push_back(e.prediction);
        truth.push_back(e.truth);
        base_pred.push_back(baseline.at(key).prediction);
    }

    const auto overall = summarize_errors(pred, truth);
    const auto overall_base = summarize_errors(base_pred, truth);
    report.n_bites = pred.size();
    report.mae_g = overall.mae;
    report.mse_g2 = overall.mse;
    report.mape_pct = overall.mape_pct;
    report.mape_excluded = overall.mape_excluded;
    if (!is_baseline && overall_base.mae > 0.0) report.improvement_pct = improvement_pct(overall_base.mae, overall.mae);

    for (const auto& [subject, idx] : by_subject) {
        std::vector<double> p, t, b;
        for (auto i : idx) {
            p.push_back(pred[i]);
            t.push_back(truth[i]);
            b.push_back(base_pred[i]);
        }
        SubjectMetrics sm;
        sm.subject_id = subject;
        sm.bites = idx.size();
        sm.mae_g = summarize_errors(p, t).mae;
        const double base_mae = summarize_errors(b, t).mae;
        if (!is_baseline && base_mae > 0.0) sm.improvement_pct = improvement_pct(base_mae, sm.mae_g);
        report.per_subject.push_back(sm);
    }

    double diff_sum = 0.0;
    for (const auto& [session, meal] : by_session) {
        report.meal_diffs.push_back({session, meal.first, meal.second});
        diff_sum += meal.second;
    }
    report.mean_meal_diff_g = diff_sum / static_cast<double>(report.meal_diffs.size());
    return report;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_number(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace

json to_json(const MetricsReport& r) {
    json per_subject = json::array();
    for (const auto& s : r.per_subject) {
        per_subject.push_back({{"subject_id", s.subject_id},
                               {"bites", s.bites},
                               {"mae_g", s.mae_g},
                               {"improvement_pct", optional_number(s.improvement_pct)}});
    }
    json meals = json::array();
    for (const auto& m : r.meal_diffs) {
        meals.push_back({{"session_id", m.session_id}, {"subject_id", m.subject_id}, {"diff_g", m.diff_g}});
    }
    return {{"model", r.model_tag},
            {"n_bites", r.n_bites},
            {"mae_g", r.mae_g},
            {"mape_pct", r.mape_pct},
            {"mape_excluded", r.mape_excluded},
            {"mse_g2", r.mse_g2},
            {"improvement_pct", optional_number(r.improvement_pct)},
            {"improvement_applicable", r.improvement_pct.has_value()},
            {"per_subject", per_subject},
            {"meal_diffs", meals},
            {"mean_meal_diff_g", r.mean_meal_diff_g}};
}

MetricsReport report_from_json(const json& j) {
    MetricsReport r;
    r.model_tag = j.at("model").get<std::string>();
    r.n_bites = j.at("n_bites").get<std::size_t>();
    r.mae_g = j.at("mae_g").get<double>();
    r.mape_pct = j.at("mape_pct").get<double>();
    r.mape_excluded = j.value("mape_excluded", std::size_t{0});
    r.mse_g2 = j.at("mse_g2").get<double>();
    r.improvement_pct = optional_number(j.at("improvement_pct"));
    for (const auto& s : j.value("per_subject", json::array())) {
        r.per_subject.push_back({s.at("subject_id").get<std::string>(), s.at("bites").get<std::size_t>(),
                                 s.at("mae_g").get<double>(), optional_number(s.at("improvement_pct"))});
    }
    for (const auto& m : j.value("meal_diffs", json::array())) {
        r.meal_diffs.push_back({m.at("session_id").get<std::string>(), m.at("subject_id").get<std::string>(),
                                m.at("diff_g").get<double>()});
    }
    r.mean_meal_diff_g = j.value("mean_meal_diff_g", 0.0);
    return r;
}

ErrorHistogram error_histogram(std::span<const FoldResult> folds, double bin_width_g) {
    if (!(bin_width_g > 0.0)) throw Error(ErrorCode::InvalidParams, "bin width must be positive");
    ErrorHistogram h;
    h.bin_width_g = bin_width_g;
    std::vector<double> errors;
    for (const auto& f : folds) {
        for (std::size_t i = 0; i < f.truths.size(); ++i) errors.push_back(std::abs(f.predictions[i] - f.truths[i]));
    }
    if (errors.empty()) return h;
    double sum = 0.0;
    std::size_t top = 0;
    std::vector<std::size_t> bin_of(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i) {
        sum += errors[i];
        bin_of[i] = static_cast<std::size_t>(std::floor(errors[i] / bin_width_g));
        top = std::max(top, bin_of[i]);
    }
    h.mae_g = sum / static_cast<double>(errors.size());
    h.bins.resize(top + 1);
    for (std::size_t k = 0; k <= top; ++k) {
        h.bins[k].low_g = static_cast<double>(k) * bin_width_g;
        h.bins[k].high_g = static_cast<double>(k + 1) * bin_width_g;
    }
    for (auto b : bin_of) h.bins[b].count++;
    return h;
}

void write_histogram_csv(const ErrorHistogram& h, const std::string& model_tag, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + path.string());
    out << "# model=" << model_tag << ",mae_g=" << csv::format_double(h.mae_g) << '\n';
    out << "bin_low_g,bin_high_g,count\n";
    for (const auto& b : h.bins) {
        out << csv::format_double(b.low_g) << ',' << csv::format_double(b.high_g) << ',' << b.count << '\n';
    }
}

}  // namespace biteweight::evaluation
