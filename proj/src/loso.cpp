#include <algorithm>

#include "biteweight/error.hpp"
#include "biteweight/evaluation.hpp"

namespace biteweight::evaluation {

std::vector<Fold> loso_split(std::span<const Session> dataset) {
    std::map<std::string, std::vector<std::size_t>> by_subject;
    for (std::size_t i = 0; i < dataset.size(); ++i) by_subject[dataset[i].subject_id].push_back(i);
    if (by_subject.size() < 2) {
        throw Error(ErrorCode::TooFewSubjects,
                    "leave-one-subject-out needs at least 2 subjects, got " + std::to_string(by_subject.size()));
    }
    std::vector<Fold> folds;
    for (const auto& [subject, sessions] : by_subject) {
        Fold fold;
        fold.test_subject = subject;
        fold.test_sessions = sessions;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            if (dataset[i].subject_id != subject) fold.train_sessions.push_back(i);
        }
        folds.push_back(std::move(fold));
    }
    return folds;
}

std::string bite_key(const Session& session, const BiteAnnotation& bite) {
    return session.subject_id + "/" + session.session_id + "/" + bite.bite_id;
}

std::set<std::string> common_subset(const std::map<std::string, std::set<std::string>>& usable) {
    if (usable.empty()) throw Error(ErrorCode::EmptyIntersection, "no models to intersect");
    auto it = usable.begin();
    std::set<std::string> common = it->second;
    for (++it; it != usable.end(); ++it) {
        std::set<std::string> next;
        std::set_intersection(common.begin(), common.end(), it->second.begin(), it->second.end(),
                              std::inserter(next, next.begin()));
        common = std::move(next);
    }
    if (common.empty()) throw Error(ErrorCode::EmptyIntersection, "models share no usable bites");
    return common;
}

nlohmann::json fold_manifest_json(const std::string& pipeline, std::span<const FoldManifestEntry> folds) {
    using nlohmann::json;
    json out{{"pipeline", pipeline}, {"folds", json::array()}};
    auto bites = [](const std::vector<std::pair<std::string, std::string>>& list) {
        json arr = json::array();
        for (const auto& [subject, key] : list) arr.push_back({{"subject", subject}, {"bite", key}});
        return arr;
    };
    for (const auto& f : folds) {
        out["folds"].push_back(
            {{"test_subject", f.test_subject}, {"train", bites(f.train_bites)}, {"test", bites(f.test_bites)}});
    }
    return out;
}

std::size_t audit_fold_manifest(const nlohmann::json& manifest) {
    std::size_t leaks = 0;
    for (const auto& fold : manifest.at("folds")) {
        const auto test_subject = fold.at("test_subject").get<std::string>();
        for (const auto& bite : fold.at("train")) {
            if (bite.at("subject").get<std::string>() == test_subject) ++leaks;
        }
    }
    return leaks;
}

}  // namespace biteweight::evaluation
