#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "biteweight/types.hpp"
#include "json.hpp"

namespace biteweight::evaluation {

// ---------------------------------------------------------------------------
// Leave-one-subject-out folds

struct Fold {
    std::string test_subject;
    std::vector<std::size_t> train_sessions;  // indices into the dataset
    std::vector<std::size_t> test_sessions;
};

/// One fold per distinct subject, ordered by subject id. Throws
/// TooFewSubjects for fewer than two subjects.
std::vector<Fold> loso_split(std::span<const Session> dataset);

/// Dataset-wide bite identifier: "<subject>/<session>/<bite>".
std::string bite_key(const Session& session, const BiteAnnotation& bite);

/// Intersection of the per-model usable bite sets. Throws EmptyIntersection.
std::set<std::string> common_subset(const std::map<std::string, std::set<std::string>>& usable);

// ---------------------------------------------------------------------------
// Metrics

struct FoldResult {
    std::string subject_id;
    std::string model_tag;
    std::vector<std::string> bite_keys;
    std::vector<std::string> session_ids;
    std::vector<double> predictions;  // grams
    std::vector<double> truths;       // grams
};

inline constexpr const char* kBaselineTag = "baseline";

struct SubjectMetrics {
    std::string subject_id;
    std::size_t bites = 0;
    double mae_g = 0.0;
    std::optional<double> improvement_pct;
};

struct MealDiff {
    std::string session_id;
    std::string subject_id;
    double diff_g = 0.0;  // sum of predictions - sum of truths
};

struct MetricsReport {
    std::string model_tag;
    std::size_t n_bites = 0;
    double mae_g = 0.0;
    double mape_pct = 0.0;
    std::size_t mape_excluded = 0;  // zero-weight bites left out of MAPE
    double mse_g2 = 0.0;
    std::optional<double> improvement_pct;  // empty for the baseline itself
    std::vector<SubjectMetrics> per_subject;
    std::vector<MealDiff> meal_diffs;
    double mean_meal_diff_g = 0.0;
};

/// (MAE_baseline - MAE_model) / MAE_baseline * 100.
double improvement_pct(double mae_baseline, double mae_model);

struct ErrorSummary {
    double mae = 0.0;
    double mse = 0.0;
    double mape_pct = 0.0;
    std::size_t mape_excluded = 0;
};

ErrorSummary summarize_errors(std::span<const double> predictions, std::span<const double> truths);

/// Throws MismatchedBiteSets unless both fold sets cover the same bites.
MetricsReport compute_metrics(std::span<const FoldResult> folds, std::span<const FoldResult> baseline_folds);

nlohmann::json to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Absolute-error histogram

struct HistogramBin {
    double low_g = 0.0;
    double high_g = 0.0;
    std::size_t count = 0;
};

struct ErrorHistogram {
    double bin_width_g = 1.0;
    std::vector<HistogramBin> bins;
    double mae_g = 0.0;
};

/// Bins [k w, (k + 1) w) from zero up to the largest absolute error.
ErrorHistogram error_histogram(std::span<const FoldResult> folds, double bin_width_g);

/// CSV "bin_low_g,bin_high_g,count" preceded by a "# mae_g=..." metadata line.
void write_histogram_csv(const ErrorHistogram& histogram, const std::string& model_tag,
                         const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Fold manifests

struct FoldManifestEntry {
    std::string test_subject;
    std::vector<std::pair<std::string, std::string>> train_bites;  // (subject, bite key)
    std::vector<std::pair<std::string, std::string>> test_bites;
};

nlohmann::json fold_manifest_json(const std::string& pipeline, std::span<const FoldManifestEntry> folds);

/// Number of training bites that belong to their fold's test subject.
std::size_t audit_fold_manifest(const nlohmann::json& manifest);

}  // namespace biteweight::evaluation
