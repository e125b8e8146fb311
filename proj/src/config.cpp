#include "biteweight/config.hpp"

namespace biteweight {

using nlohmann::json;

void to_json(json& j, const PipelineConfig& c) {
    j = json{
        {"preprocess",
         {{"target_hz", c.preprocess.target_hz},
          {"highpass_taps", c.preprocess.highpass_taps},
          {"highpass_cutoff_hz", c.preprocess.highpass_cutoff_hz},
          {"median_order", c.preprocess.median_order}}},
        {"behavioral",
         {{"strong_pick", c.behavioral.strong_pick},
          {"weak_pick", c.behavioral.weak_pick},
          {"max_gap_windows", c.behavioral.max_gap_windows},
          {"window_step_s", c.behavioral.window_step_s},
          {"window_length_s", c.behavioral.window_length_s},
          {"variance_min", c.behavioral.variance_min},
          {"variance_max", c.behavioral.variance_max},
          {"duration_max_frames", c.behavioral.duration_max_frames}}},
        {"statistical",
         {{"window_s", c.statistical.window_s},
          {"step_s", c.statistical.step_s},
          {"entropy_bins", c.statistical.entropy_bins}}},
        {"svr",
         {{"c", c.svr.c},
          {"epsilon", c.svr.epsilon},
          {"gap_tolerance", c.svr.gap_tolerance},
          {"max_passes", c.svr.max_passes}}},
        {"forest",
         {{"trees", c.forest.trees},
          {"seed", c.forest.seed},
          {"bootstrap", c.forest.bootstrap},
          {"features_per_split", c.forest.features_per_split}}},
        {"mirtchouk",
         {{"window_s", c.mirtchouk.window_s},
          {"step_s", c.mirtchouk.step_s}}},
    };
}

namespace {

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
    if (auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

}  // namespace

void from_json(const json& j, PipelineConfig& c) {
    c = PipelineConfig{};
    if (auto p = j.find("preprocess"); p != j.end()) {
        read_if(*p, "target_hz", c.preprocess.target_hz);
        read_if(*p, "highpass_taps", c.preprocess.highpass_taps);
        read_if(*p, "highpass_cutoff_hz", c.preprocess.highpass_cutoff_hz);
        read_if(*p, "median_order", c.preprocess.median_order);
    }
    if (auto b = j.find("behavioral"); b != j.end()) {
        read_if(*b, "strong_pick", c.behavioral.strong_pick);
        read_if(*b, "weak_pick", c.behavioral.weak_pick);
        read_if(*b, "max_gap_windows", c.behavioral.max_gap_windows);
        read_if(*b, "window_step_s", c.behavioral.window_step_s);
        read_if(*b, "window_length_s", c.behavioral.window_length_s);
        read_if(*b, "variance_min", c.behavioral.variance_min);
        read_if(*b, "variance_max", c.behavioral.variance_max);
        read_if(*b, "duration_max_frames", c.behavioral.duration_max_frames);
    }
    if (auto s = j.find("statistical"); s != j.end()) {
        read_if(*s, "window_s", c.statistical.window_s);
        read_if(*s, "step_s", c.statistical.step_s);
        read_if(*s, "entropy_bins", c.statistical.entropy_bins);
    }
    if (auto s = j.find("svr"); s != j.end()) {
        read_if(*s, "c", c.svr.c);
        read_if(*s, "epsilon", c.svr.epsilon);
        read_if(*s, "gap_tolerance", c.svr.gap_tolerance);
        read_if(*s, "max_passes", c.svr.max_passes);
    }
    if (auto f = j.find("forest"); f != j.end()) {
        read_if(*f, "trees", c.forest.trees);
        read_if(*f, "seed", c.forest.seed);
        read_if(*f, "bootstrap", c.forest.bootstrap);
        read_if(*f, "features_per_split", c.forest.features_per_split);
    }
    if (auto m = j.find("mirtchouk"); m != j.end()) {
        read_if(*m, "window_s", c.mirtchouk.window_s);
        read_if(*m, "step_s", c.mirtchouk.step_s);
    }
}

}  // namespace biteweight
