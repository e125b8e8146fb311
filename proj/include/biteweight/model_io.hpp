#pragma once

#include <filesystem>
#include <variant>

#include "biteweight/regression.hpp"
#include "json.hpp"

namespace biteweight::regression {

nlohmann::json to_json(const SvrModel& model);
nlohmann::json to_json(const ForestModel& model);
nlohmann::json to_json(const BaselinePredictor& model);

SvrModel svr_from_json(const nlohmann::json& j);
ForestModel forest_from_json(const nlohmann::json& j);
BaselinePredictor baseline_from_json(const nlohmann::json& j);

/// Any fitted model; the JSON "type" field selects the alternative.
using AnyModel = std::variant<SvrModel, ForestModel, BaselinePredictor>;

nlohmann::json any_to_json(const AnyModel& model);
AnyModel any_from_json(const nlohmann::json& j);

void save_model(const AnyModel& model, const std::filesystem::path& path);
AnyModel load_model(const std::filesystem::path& path);

}  // namespace biteweight::regression
