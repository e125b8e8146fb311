#include "biteweight/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "biteweight/behavioral_features.hpp"
#include "biteweight/error.hpp"
#include "biteweight/mirtchouk.hpp"
#include "biteweight/preprocess.hpp"
#include "biteweight/statistical_features.hpp"

namespace biteweight::pipeline {

using regression::AnyModel;
using regression::Matrix;
using regression::Vector;

std::string to_string(Kind kind) {
    switch (kind) {
        case Kind::Proposed: return "proposed";
        case Kind::Mirtchouk: return "mirtchouk";
        case Kind::Baseline: return "baseline";
    }
    return "unknown";
}

Kind kind_from_string(const std::string& name) {
    if (name == "proposed") return Kind::Proposed;
    if (name == "mirtchouk") return Kind::Mirtchouk;
    if (name == "baseline") return Kind::Baseline;
    throw Error(ErrorCode::InvalidParams, "unknown pipeline '" + name + "'");
}

FeatureVector proposed_features(const BiteSlice& slice, const PipelineConfig& config) {
    const auto behavior = behavioral::extract(slice.windows, slice.imu, config.behavioral);
    const auto windows = statistical::slide_windows(slice.imu, config.statistical);
    const auto stat = statistical::aggregate(windows);
    return {behavior.f1, behavior.f2, stat.f3, stat.f4, stat.f5, stat.f6};
}

std::vector<double> mirtchouk_features(const BiteSlice& slice, const PipelineConfig& config) {
    const auto windows = mirtchouk::windows(slice.imu, config.mirtchouk);
    const auto vec = mirtchouk::bite_vector(windows);
    return {vec.begin(), vec.end()};
}

std::vector<Session> preprocess_all(std::span<const Session> sessions, const PipelineConfig& config) {
    std::vector<Session> out;
    out.reserve(sessions.size());
    for (const auto& s : sessions) out.push_back(preprocess::preprocess_session(s, config.preprocess));
    return out;
}

std::vector<BiteRecord> extract(std::span<const Session> preprocessed, Kind kind, const PipelineConfig& config) {
    std::vector<BiteRecord> records;
    for (const auto& session : preprocessed) {
        for (const auto& bite : session.bites) {
            BiteRecord rec;
            rec.key = evaluation::bite_key(session, bite);
            rec.subject_id = session.subject_id;
            rec.session_id = session.session_id;
            rec.bite_id = bite.bite_id;
            rec.weight_g = bite.weight_g;
            if (kind != Kind::Baseline) {
                try {
                    const auto slice = slice_bite(session, bite);
                    if (kind == Kind::Proposed) {
                        const auto f = proposed_features(slice, config).as_array();
                        rec.features.assign(f.begin(), f.end());
                    } else {
                        rec.features = mirtchouk_features(slice, config);
                    }
                    if (!std::all_of(rec.features.begin(), rec.features.end(),
                                     [](double v) { return std::isfinite(v); })) {
                        rec.usable = false;
                        rec.note = "non-finite feature";
                    }
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::NoMouthEvent && e.code() != ErrorCode::EmptyBite) throw;
                    rec.usable = false;
                    rec.note = std::string(biteweight::to_string(e.code()));
                }
            }
            records.push_back(std::move(rec));
        }
    }
    return records;
}

AnyModel train(Kind kind, std::span<const BiteRecord* const> records, const PipelineConfig& config) {
    std::vector<const BiteRecord*> rows;
    for (const auto* r : records) {
        if (r->usable) rows.push_back(r);
    }
    if (rows.empty()) throw Error(ErrorCode::EmptyTraining, "no usable training bites");

    Vector y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = rows[i]->weight_g;
    if (kind == Kind::Baseline) return regression::fit_baseline(y);

    const auto d = static_cast<Eigen::Index>(rows.front()->features.size());
    Matrix x(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (Eigen::Index c = 0; c < d; ++c) x(static_cast<Eigen::Index>(i), c) = rows[i]->features[static_cast<std::size_t>(c)];
    }
    if (kind == Kind::Proposed) return regression::train_svr(x, y, config.svr);
    return regression::fit_forest(x, y, config.forest);
}

double predict(const AnyModel& model, const BiteRecord& record) {
    const Vector x = Eigen::Map<const Vector>(record.features.data(), static_cast<Eigen::Index>(record.features.size()));
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, regression::SvrModel>) {
                return regression::predict_svr(m, x);
            } else if constexpr (std::is_same_v<T, regression::ForestModel>) {
                return regression::predict_forest(m, x);
            } else {
                return regression::predict_baseline(m);
            }
        },
        model);
}

namespace {

std::set<std::string> usable_keys(const std::vector<BiteRecord>& records) {
    std::set<std::string> out;
    for (const auto& r : records) {
        if (r.usable) out.insert(r.key);
    }
    return out;
}

evaluation::FoldResult run_fold(Kind kind, const std::vector<BiteRecord>& records, const std::string& test_subject,
                                const std::set<std::string>& common, const PipelineConfig& config,
                                AnyModel* model_out) {
    std::vector<const BiteRecord*> train_rows;
    for (const auto& r : records) {
        if (r.subject_id != test_subject) train_rows.push_back(&r);
    }
    auto model = train(kind, train_rows, config);

    evaluation::FoldResult fold;
    fold.subject_id = test_subject;
    fold.model_tag = to_string(kind);
    for (const auto& r : records) {
        if (r.subject_id != test_subject || !common.contains(r.key)) continue;
        fold.bite_keys.push_back(r.key);
        fold.session_ids.push_back(r.session_id);
        fold.predictions.push_back(predict(model, r));
        fold.truths.push_back(r.weight_g);
    }
    if (model_out) *model_out = std::move(model);
    return fold;
}

}  // namespace

EvaluationOutput evaluate_loso(std::span<const Session> preprocessed, Kind kind, const PipelineConfig& config,
                               double histogram_bin_g) {
    const auto folds = evaluation::loso_split(preprocessed);

    std::map<Kind, std::vector<BiteRecord>> records;
    for (Kind k : {Kind::Proposed, Kind::Mirtchouk, Kind::Baseline}) records[k] = extract(preprocessed, k, config);
    std::map<std::string, std::set<std::string>> usable;
    for (const auto& [k, recs] : records) usable[to_string(k)] = usable_keys(recs);

    EvaluationOutput out;
    out.common = evaluation::common_subset(usable);

    std::vector<evaluation::FoldManifestEntry> manifest;
    for (const auto& fold : folds) {
        AnyModel model;
        auto result = run_fold(kind, records[kind], fold.test_subject, out.common, config, &model);
        if (result.truths.empty()) continue;  // subject has no bite in the common subset
        out.fold_models.emplace_back(fold.test_subject, std::move(model));
        out.baseline_folds.push_back(
            run_fold(Kind::Baseline, records[Kind::Baseline], fold.test_subject, out.common, config, nullptr));

        evaluation::FoldManifestEntry entry;
        entry.test_subject = fold.test_subject;
        for (const auto& r : records[kind]) {
            if (r.subject_id != fold.test_subject && r.usable) entry.train_bites.emplace_back(r.subject_id, r.key);
        }
        for (std::size_t i = 0; i < result.bite_keys.size(); ++i) {
            entry.test_bites.emplace_back(fold.test_subject, result.bite_keys[i]);
        }
        manifest.push_back(std::move(entry));
        out.folds.push_back(std::move(result));
    }

    out.report = evaluation::compute_metrics(out.folds, out.baseline_folds);
    out.histogram = evaluation::error_histogram(out.folds, histogram_bin_g);
    out.fold_manifest = evaluation::fold_manifest_json(to_string(kind), manifest);
    return out;
}

}  // namespace biteweight::pipeline
