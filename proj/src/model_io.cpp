#include "biteweight/model_io.hpp"

#include <fstream>

#include "biteweight/error.hpp"

namespace biteweight::regression {

using nlohmann::json;

namespace {

json vec(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vec(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

json to_json(const SvrModel& m) {
    return {{"type", "svr"},
            {"w", vec(m.w)},
            {"b", m.b},
            {"C", m.c},
            {"eps", m.epsilon},
            {"scaler", {{"means", vec(m.scaler.means)}, {"stds", vec(m.scaler.stds)}}},
            {"duality_gap", m.gap}};
}

json to_json(const ForestModel& m) {
    json trees = json::array();
    for (const auto& tree : m.trees) {
        json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
             value = json::array();
        for (const auto& node : tree.nodes) {
            feature.push_back(node.feature);
            threshold.push_back(node.threshold);
            left.push_back(node.left);
            right.push_back(node.right);
            value.push_back(node.value);
        }
        trees.push_back(
            {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}});
    }
    return {{"type", "forest"}, {"seed", m.seed}, {"n_features", m.n_features}, {"trees", trees}};
}

json to_json(const BaselinePredictor& m) { return {{"type", "baseline"}, {"mean_weight_g", m.mean_weight_g}}; }

SvrModel svr_from_json(const json& j) {
    SvrModel m;
    m.w = vec(j.at("w"));
    m.b = j.at("b").get<double>();
    m.c = j.at("C").get<double>();
    m.epsilon = j.at("eps").get<double>();
    m.scaler.means = vec(j.at("scaler").at("means"));
    m.scaler.stds = vec(j.at("scaler").at("stds"));
    m.gap = j.value("duality_gap", 0.0);
    if (m.w.size() != m.scaler.means.size() || m.w.size() != m.scaler.stds.size()) {
        throw Error(ErrorCode::ParseError, "SVR model dimensions disagree");
    }
    return m;
}

ForestModel forest_from_json(const json& j) {
    ForestModel m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.n_features = j.at("n_features").get<int>();
    for (const auto& t : j.at("trees")) {
        const auto feature = t.at("feature").get<std::vector<int>>();
        const auto threshold = t.at("threshold").get<std::vector<double>>();
        const auto left = t.at("left").get<std::vector<int>>();
        const auto right = t.at("right").get<std::vector<int>>();
        const auto value = t.at("value").get<std::vector<double>>();
        const auto n = feature.size();
        if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n || n == 0) {
            throw Error(ErrorCode::ParseError, "forest tree arrays disagree in length");
        }
        RegressionTree tree;
        for (std::size_t k = 0; k < n; ++k) {
            const auto in_range = [&](int idx) { return idx >= 0 && static_cast<std::size_t>(idx) < n; };
            if (feature[k] >= m.n_features || (feature[k] >= 0 && !(in_range(left[k]) && in_range(right[k])))) {
                throw Error(ErrorCode::ParseError, "forest node references are out of range");
            }
            tree.nodes.push_back({feature[k], threshold[k], left[k], right[k], value[k]});
        }
        m.trees.push_back(std::move(tree));
    }
    return m;
}

BaselinePredictor baseline_from_json(const json& j) { return {j.at("mean_weight_g").get<double>()}; }

json any_to_json(const AnyModel& model) {
    return std::visit([](const auto& m) { return to_json(m); }, model);
}

AnyModel any_from_json(const json& j) {
    try {
        const auto type = j.at("type").get<std::string>();
        if (type == "svr") return svr_from_json(j);
        if (type == "forest") return forest_from_json(j);
        if (type == "baseline") return baseline_from_json(j);
        throw Error(ErrorCode::ParseError, "unknown model type '" + type + "'");
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

void save_model(const AnyModel& model, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + path.string());
    out << any_to_json(model).dump() << '\n';
}

AnyModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingFile, path.string());
    try {
        return any_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

}  // namespace biteweight::regression
