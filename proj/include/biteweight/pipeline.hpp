#pragma once

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biteweight/config.hpp"
#include "biteweight/evaluation.hpp"
#include "biteweight/model_io.hpp"
#include "biteweight/session.hpp"
#include "biteweight/types.hpp"

namespace biteweight::pipeline {

enum class Kind { Proposed, Mirtchouk, Baseline };

std::string to_string(Kind kind);
Kind kind_from_string(const std::string& name);  // throws InvalidParams

/// Per-bite features of one pipeline. Bites a pipeline cannot process are
/// kept with usable = false and the reason in `note`.
struct BiteRecord {
    std::string key;
    std::string subject_id;
    std::string session_id;
    std::string bite_id;
    double weight_g = 0.0;
    std::vector<double> features;
    bool usable = true;
    std::string note;
};

/// f1..f6 of one bite slice. Throws NoMouthEvent / EmptyBite.
FeatureVector proposed_features(const BiteSlice& slice, const PipelineConfig& config = {});
std::vector<double> mirtchouk_features(const BiteSlice& slice, const PipelineConfig& config = {});

std::vector<Session> preprocess_all(std::span<const Session> sessions, const PipelineConfig& config = {});

/// Features for every annotated bite of already preprocessed sessions.
std::vector<BiteRecord> extract(std::span<const Session> preprocessed, Kind kind, const PipelineConfig& config = {});

/// Fits the pipeline's learner on the usable records. Throws EmptyTraining.
regression::AnyModel train(Kind kind, std::span<const BiteRecord* const> records, const PipelineConfig& config = {});
double predict(const regression::AnyModel& model, const BiteRecord& record);

struct EvaluationOutput {
    evaluation::MetricsReport report;
    evaluation::ErrorHistogram histogram;
    nlohmann::json fold_manifest;
    std::vector<std::pair<std::string, regression::AnyModel>> fold_models;  // (test subject, model)
    std::vector<evaluation::FoldResult> folds;
    std::vector<evaluation::FoldResult> baseline_folds;
    std::set<std::string> common;
};

/// Leave-one-subject-out evaluation of `kind` against the mean baseline.
/// Every pipeline is trained on its own usable bites; all metrics are taken
/// on the intersection of the usable sets of all three pipelines.
EvaluationOutput evaluate_loso(std::span<const Session> preprocessed, Kind kind, const PipelineConfig& config = {},
                               double histogram_bin_g = 1.0);

}  // namespace biteweight::pipeline
