#include "biteweight/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "biteweight/csv.hpp"
#include "biteweight/dataset_io.hpp"
#include "biteweight/error.hpp"
#include "biteweight/evaluation.hpp"
#include "biteweight/mirtchouk.hpp"
#include "biteweight/model_io.hpp"
#include "biteweight/pipeline.hpp"

namespace biteweight::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void to_json(json& j, const RunConfig& r) {
    j = json{{"command", r.command},
             {"pipeline", r.pipeline},
             {"manifest", r.manifest},
             {"synth", r.synth},
             {"subjects", r.subjects},
             {"seed", r.seed},
             {"profile", r.profile},
             {"config", r.config},
             {"model", r.model},
             {"histogram_bin_g", r.histogram_bin_g}};
}

void from_json(const json& j, RunConfig& r) {
    r = RunConfig{};
    r.command = j.value("command", r.command);
    r.pipeline = j.value("pipeline", r.pipeline);
    r.manifest = j.value("manifest", r.manifest);
    r.synth = j.value("synth", r.synth);
    r.subjects = j.value("subjects", r.subjects);
    r.seed = j.value("seed", r.seed);
    if (j.contains("profile")) r.profile = j.at("profile").get<synthetic::Profile>();
    if (j.contains("config")) r.config = j.at("config").get<PipelineConfig>();
    r.model = j.value("model", r.model);
    r.histogram_bin_g = j.value("histogram_bin_g", r.histogram_bin_g);
}

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string default_output_dir() {
    if (const char* env = std::getenv("BITEWEIGHT_OUT"); env != nullptr && *env != '\0') return env;
    return "biteweight_out";
}

void write_json(const json& j, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MissingFile, path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

std::vector<Session> load_sessions(const RunConfig& run) {
    if (run.synth) return synthetic::generate(run.subjects, run.seed, run.profile);
    if (run.manifest.empty()) throw UsageError("a data source is required: --manifest PATH or --synth");
    if (!fs::exists(run.manifest)) throw UsageError("manifest not found: " + run.manifest);
    return load_dataset(load_manifest(run.manifest));
}

std::string fmt2(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
}

void cmd_preprocess(const RunConfig& run, const fs::path& out_dir, std::ostream& out) {
    const auto sessions = pipeline::preprocess_all(load_sessions(run), run.config);
    const fs::path dir = out_dir / "preprocessed";
    Manifest manifest;
    for (const auto& s : sessions) manifest.sessions.push_back(write_session(s, dir));
    save_manifest(manifest, dir / "manifest.json");
    out << "preprocessed " << sessions.size() << " sessions into " << dir.string() << '\n';
}

void cmd_features(const RunConfig& run, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
    const auto kind = pipeline::kind_from_string(run.pipeline);
    if (kind == pipeline::Kind::Baseline) throw UsageError("the baseline has no features");
    const auto sessions = pipeline::preprocess_all(load_sessions(run), run.config);
    const auto records = pipeline::extract(sessions, kind, run.config);

    std::vector<std::string> columns;
    if (kind == pipeline::Kind::Proposed) {
        columns = {"f1", "f2", "f3", "f4", "f5", "f6"};
    } else {
        columns = mirtchouk::feature_names();
    }
    std::map<std::string, std::ofstream> files;
    std::size_t written = 0;
    for (const auto& r : records) {
        if (!r.usable) {
            err << "skipping " << r.key << ": " << r.note << '\n';
            continue;
        }
        auto it = files.find(r.session_id);
        if (it == files.end()) {
            const fs::path path = out_dir / "features" / (r.session_id + "_" + run.pipeline + ".csv");
            fs::create_directories(path.parent_path());
            it = files.emplace(r.session_id, std::ofstream(path, std::ios::binary)).first;
            if (!it->second) throw Error(ErrorCode::MissingFile, "cannot write " + path.string());
            it->second << "bite_id";
            for (const auto& c : columns) it->second << ',' << c;
            it->second << ",weight_g\n";
        }
        it->second << r.bite_id;
        for (double v : r.features) it->second << ',' << csv::format_double(v);
        it->second << ',' << csv::format_double(r.weight_g) << '\n';
        ++written;
    }
    out << "wrote features for " << written << " bites\n";
}

void cmd_train(const RunConfig& run, const fs::path& out_dir, std::ostream& out) {
    const auto kind = pipeline::kind_from_string(run.pipeline);
    const auto sessions = pipeline::preprocess_all(load_sessions(run), run.config);
    const auto records = pipeline::extract(sessions, kind, run.config);
    std::vector<const pipeline::BiteRecord*> rows;
    for (const auto& r : records) rows.push_back(&r);
    const auto model = pipeline::train(kind, rows, run.config);
    const fs::path path = out_dir / "models" / (run.pipeline + ".json");
    regression::save_model(model, path);
    out << "saved " << path.string() << '\n';
}

pipeline::Kind kind_of(const regression::AnyModel& model) {
    if (std::holds_alternative<regression::SvrModel>(model)) return pipeline::Kind::Proposed;
    if (std::holds_alternative<regression::ForestModel>(model)) return pipeline::Kind::Mirtchouk;
    return pipeline::Kind::Baseline;
}

void cmd_predict(const RunConfig& run, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
    if (run.model.empty()) throw UsageError("--model is required");
    const auto model = regression::load_model(run.model);
    const auto kind = kind_of(model);
    const auto sessions = pipeline::preprocess_all(load_sessions(run), run.config);
    const auto records = pipeline::extract(sessions, kind, run.config);
    const fs::path path = out_dir / ("predictions_" + pipeline::to_string(kind) + ".csv");
    fs::create_directories(out_dir);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::MissingFile, "cannot write " + path.string());
    file << "subject_id,session_id,bite_id,predicted_g,weight_g\n";
    std::size_t n = 0;
    for (const auto& r : records) {
        if (!r.usable) {
            err << "skipping " << r.key << ": " << r.note << '\n';
            continue;
        }
        file << r.subject_id << ',' << r.session_id << ',' << r.bite_id << ','
             << csv::format_double(pipeline::predict(model, r)) << ',' << csv::format_double(r.weight_g) << '\n';
        ++n;
    }
    out << "predicted " << n << " bites into " << path.string() << '\n';
}

void cmd_evaluate(const RunConfig& run, const fs::path& out_dir, std::ostream& out) {
    const auto kind = pipeline::kind_from_string(run.pipeline);
    const auto sessions = pipeline::preprocess_all(load_sessions(run), run.config);
    const auto result = pipeline::evaluate_loso(sessions, kind, run.config, run.histogram_bin_g);
    const std::string tag = run.pipeline;
    write_json(evaluation::to_json(result.report), out_dir / ("metrics_" + tag + ".json"));
    evaluation::write_histogram_csv(result.histogram, tag, out_dir / ("histogram_" + tag + ".csv"));
    write_json(result.fold_manifest, out_dir / ("folds_" + tag + ".json"));
    for (const auto& [subject, model] : result.fold_models) {
        regression::save_model(model, out_dir / "models" / (tag + "_fold_" + subject + ".json"));
    }
    out << tag << ": bites=" << result.report.n_bites << " MAE=" << fmt2(result.report.mae_g) << " g";
    if (result.report.improvement_pct) out << " improvement=" << fmt2(*result.report.improvement_pct) << " %";
    out << '\n';
}

void cmd_synth(const RunConfig& run, const fs::path& out_dir, std::ostream& out) {
    const auto sessions = synthetic::generate(run.subjects, run.seed, run.profile);
    const fs::path dir = out_dir / "synth";
    Manifest manifest;
    for (const auto& s : sessions) manifest.sessions.push_back(write_session(s, dir));
    save_manifest(manifest, dir / "manifest.json");
    out << "generated " << sessions.size() << " sessions into " << dir.string() << '\n';
}

void cmd_report(const fs::path& out_dir, std::ostream& out) {
    std::vector<fs::path> paths;
    if (fs::is_directory(out_dir)) {
        for (const auto& entry : fs::directory_iterator(out_dir)) {
            const auto name = entry.path().filename().string();
            if (entry.is_regular_file() && name.starts_with("metrics_") && name.ends_with(".json")) {
                paths.push_back(entry.path());
            }
        }
    }
    if (paths.empty()) throw Error(ErrorCode::NoReportsFound, "no metrics_*.json in " + out_dir.string());
    std::sort(paths.begin(), paths.end());

    std::vector<evaluation::MetricsReport> reports;
    for (const auto& p : paths) {
        try {
            std::ifstream in(p, std::ios::binary);
            reports.push_back(evaluation::report_from_json(json::parse(in)));
        } catch (const std::exception& e) {
            throw Error(ErrorCode::NoReportsFound, "corrupt report " + p.string() + ": " + e.what());
        }
    }
    std::stable_sort(reports.begin(), reports.end(),
                     [](const auto& a, const auto& b) { return a.mae_g < b.mae_g; });

    const auto improvement = [](const evaluation::MetricsReport& r) {
        return r.improvement_pct ? fmt2(*r.improvement_pct) : std::string("N/A");
    };
    const std::vector<std::string> header = {"Model", "Improvement %", "MAE g", "MAPE %", "MSE g\u00b2", "Bites"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
        rows.push_back({r.model_tag, improvement(r), fmt2(r.mae_g), fmt2(r.mape_pct), fmt2(r.mse_g2),
                        std::to_string(r.n_bites)});
    }
    std::ostringstream table;
    std::ostringstream csv_text;
    const auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c == 0) {
                table << std::left << std::setw(12) << row[c];
            } else {
                table << std::right << std::setw(16) << row[c];
            }
            csv_text << (c ? "," : "") << row[c];
        }
        table << '\n';
        csv_text << '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    std::ofstream(out_dir / "report.txt", std::ios::binary) << table.str();
    std::ofstream(out_dir / "report.csv", std::ios::binary) << csv_text.str();
    out << table.str();
}

// Returns the value of --config if present so it can seed the defaults.
std::string find_config_arg(int argc, const char* const* argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.starts_with("--config=")) return a.substr(9);
    }
    return {};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig run;
    std::string config_path;
    try {
        config_path = find_config_arg(argc, argv);
        if (!config_path.empty()) run = read_json(config_path).get<RunConfig>();
    } catch (const std::exception& e) {
        err << "error: cannot read config: " << e.what() << '\n';
        return 2;
    }

    CLI::App app{"Bite weight estimation from wrist IMU data"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir = default_output_dir();
    app.add_option("--config", config_path, "Replay settings from a run.json; other flags override it");
    app.add_option("--out", out_dir, "Output directory (env BITEWEIGHT_OUT)");
    app.add_option("--manifest", run.manifest, "Dataset manifest JSON");
    app.add_flag("--synth", run.synth, "Use a generated synthetic dataset");
    app.add_option("--subjects", run.subjects, "Synthetic subjects")->check(CLI::PositiveNumber);
    app.add_option("--seed", run.seed, "Seed for synthetic data and the forest");
    app.add_option("--coupling", run.profile.coupling, "Synthetic weight/behavior coupling");
    app.add_option("--noise", run.profile.noise, "Synthetic behavior noise scale");
    app.add_option("--bites-per-session", run.profile.bites_per_session, "Synthetic bites per meal");
    app.add_option("--desk-scale", run.profile.desk_scale, "Synthetic session length scale");
    app.add_option("--pipeline", run.pipeline, "proposed | mirtchouk | baseline")
        ->check(CLI::IsMember({"proposed", "mirtchouk", "baseline"}));
    app.add_option("--model", run.model, "Model JSON for predict");
    app.add_option("--histogram-bin", run.histogram_bin_g, "Error histogram bin width in grams");

    auto& c = run.config;
    app.add_option("--target-hz", c.preprocess.target_hz);
    app.add_option("--highpass-taps", c.preprocess.highpass_taps);
    app.add_option("--highpass-cutoff", c.preprocess.highpass_cutoff_hz);
    app.add_option("--median-order", c.preprocess.median_order);
    app.add_option("--strong-pick", c.behavioral.strong_pick);
    app.add_option("--weak-pick", c.behavioral.weak_pick);
    app.add_option("--max-gap", c.behavioral.max_gap_windows);
    app.add_option("--variance-min", c.behavioral.variance_min);
    app.add_option("--variance-max", c.behavioral.variance_max);
    app.add_option("--duration-max-frames", c.behavioral.duration_max_frames);
    app.add_option("--stat-window", c.statistical.window_s);
    app.add_option("--stat-step", c.statistical.step_s);
    app.add_option("--entropy-bins", c.statistical.entropy_bins);
    app.add_option("--svr-c", c.svr.c);
    app.add_option("--svr-eps", c.svr.epsilon);
    app.add_option("--svr-gap-tol", c.svr.gap_tolerance);
    app.add_option("--svr-max-passes", c.svr.max_passes);
    app.add_option("--trees", c.forest.trees);
    app.add_option("--features-per-split", c.forest.features_per_split);
    app.add_option("--mirtchouk-window", c.mirtchouk.window_s);
    app.add_option("--mirtchouk-step", c.mirtchouk.step_s);

    auto* preprocess = app.add_subcommand("preprocess", "Resample, filter and mirror every session");
    auto* features = app.add_subcommand("features", "Write per-bite feature CSVs");
    auto* train = app.add_subcommand("train", "Fit a model on all bites");
    auto* predict = app.add_subcommand("predict", "Predict bite weights with a saved model");
    auto* evaluate = app.add_subcommand("evaluate", "Leave-one-subject-out evaluation");
    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset and manifest");
    auto* report = app.add_subcommand("report", "Tabulate metrics_*.json of the output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return 2;
    }

    run.config.forest.seed = run.seed;
    const fs::path dir = out_dir;
    try {
        if (preprocess->parsed()) run.command = "preprocess";
        if (features->parsed()) run.command = "features";
        if (train->parsed()) run.command = "train";
        if (predict->parsed()) run.command = "predict";
        if (evaluate->parsed()) run.command = "evaluate";
        if (synth->parsed()) run.command = "synth";
        if (report->parsed()) run.command = "report";

        if (run.command == "preprocess") cmd_preprocess(run, dir, out);
        if (run.command == "features") cmd_features(run, dir, out, err);
        if (run.command == "train") cmd_train(run, dir, out);
        if (run.command == "predict") cmd_predict(run, dir, out, err);
        if (run.command == "evaluate") cmd_evaluate(run, dir, out);
        if (run.command == "synth") cmd_synth(run, dir, out);
        if (run.command == "report") cmd_report(dir, out);
        write_json(run, dir / "run.json");
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace biteweight::cli
