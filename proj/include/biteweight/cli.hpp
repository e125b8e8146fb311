#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "biteweight/config.hpp"
#include "biteweight/synthetic.hpp"
#include "json.hpp"

namespace biteweight::cli {

/// Everything needed to replay a run; written to <out>/run.json.
struct RunConfig {
    std::string command;
    std::string pipeline = "proposed";
    std::string manifest;
    bool synth = false;
    int subjects = 10;
    std::uint64_t seed = 7;
    synthetic::Profile profile;
    PipelineConfig config;
    std::string model;
    double histogram_bin_g = 1.0;
};

void to_json(nlohmann::json& j, const RunConfig& r);
void from_json(const nlohmann::json& j, RunConfig& r);

/// Exit codes: 0 success, 1 runtime error, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace biteweight::cli
