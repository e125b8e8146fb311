#include "biteweight/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "biteweight/csv.hpp"
#include "biteweight/error.hpp"
#include "biteweight/session.hpp"
#include "json.hpp"

namespace biteweight {

namespace fs = std::filesystem;
using nlohmann::json;
using csv::format_double;
using csv::parse_double;

std::vector<double> ImuStream::channel(Channel c) const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s[c]);
    return out;
}

std::string to_string(Wrist w) { return w == Wrist::Left ? "left" : "right"; }

Wrist wrist_from_string(const std::string& s) {
    if (s == "left") return Wrist::Left;
    if (s == "right") return Wrist::Right;
    throw Error(ErrorCode::ParseError, "wrist must be \"left\" or \"right\", got \"" + s + "\"");
}

namespace {

double finite_field(std::string_view field, std::size_t line, const fs::path& path) {
    double v = parse_double(field, line);
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::InvariantViolation,
                    path.string() + " line " + std::to_string(line) + ": non-finite value");
    }
    return v;
}

std::ofstream open_for_write(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + path.string());
    return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

ImuStream read_imu_csv(const fs::path& path, Wrist wrist) {
    auto table = csv::read_table(path, kImuHeader);
    ImuStream stream;
    stream.wrist = wrist;
    stream.samples.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto line = table.line_numbers[r];
        ImuSample s;
        s.t = finite_field(table.rows[r][0], line, path);
        if (s.t < 0.0) {
            throw Error(ErrorCode::InvariantViolation,
                        path.string() + " line " + std::to_string(line) + ": negative timestamp");
        }
        for (std::size_t c = 0; c < kChannelCount; ++c) s.values[c] = finite_field(table.rows[r][c + 1], line, path);
        stream.samples.push_back(s);
    }
    if (stream.samples.size() >= 2 && stream.duration() > 0.0) {
        stream.fs = static_cast<double>(stream.samples.size() - 1) / stream.duration();
    }
    return stream;
}

std::vector<MicromovementWindow> read_micromovement_csv(const fs::path& path) {
    auto table = csv::read_table(path, kMicromovementHeader);
    std::vector<MicromovementWindow> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto line = table.line_numbers[r];
        MicromovementWindow w;
        double idx = finite_field(table.rows[r][0], line, path);
        if (idx < 0.0 || idx != std::floor(idx)) {
            throw Error(ErrorCode::ParseError, path.string() + " line " + std::to_string(line) + ": bad index");
        }
        w.index = static_cast<std::size_t>(idx);
        w.t_start = finite_field(table.rows[r][1], line, path);
        for (std::size_t g = 0; g < kGestureCount; ++g) w.probs[g] = finite_field(table.rows[r][g + 2], line, path);
        out.push_back(w);
    }
    return out;
}

std::vector<BiteAnnotation> read_annotation_csv(const fs::path& path) {
    auto table = csv::read_table(path, kAnnotationHeader);
    std::vector<BiteAnnotation> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto line = table.line_numbers[r];
        BiteAnnotation b;
        b.bite_id = std::string(table.rows[r][0]);
        if (b.bite_id.empty()) {
            throw Error(ErrorCode::ParseError, path.string() + " line " + std::to_string(line) + ": empty bite_id");
        }
        b.start_s = finite_field(table.rows[r][1], line, path);
        b.end_s = finite_field(table.rows[r][2], line, path);
        b.weight_g = finite_field(table.rows[r][3], line, path);
        out.push_back(std::move(b));
    }
    return out;
}

void write_imu_csv(const ImuStream& stream, const fs::path& path, double time_shift) {
    auto out = open_for_write(path);
    out << kImuHeader << '\n';
    for (const auto& s : stream.samples) {
        out << format_double(s.t - time_shift);
        for (double v : s.values) out << ',' << format_double(v);
        out << '\n';
    }
}

void write_micromovement_csv(const std::vector<MicromovementWindow>& windows, const fs::path& path,
                             double time_shift) {
    auto out = open_for_write(path);
    out << kMicromovementHeader << '\n';
    for (const auto& w : windows) {
        out << w.index << ',' << format_double(w.t_start - time_shift);
        for (double p : w.probs) out << ',' << format_double(p);
        out << '\n';
    }
}

void write_annotation_csv(const std::vector<BiteAnnotation>& bites, const fs::path& path) {
    auto out = open_for_write(path);
    out << kAnnotationHeader << '\n';
    for (const auto& b : bites) {
        out << b.bite_id << ',' << format_double(b.start_s) << ',' << format_double(b.end_s) << ','
            << format_double(b.weight_g) << '\n';
    }
}

Session load_session(const SessionFiles& files) {
    for (const auto* p : {&files.imu, &files.micromovement, &files.annotation}) {
        if (!fs::exists(*p)) throw Error(ErrorCode::MissingFile, p->string());
    }
    Session session;
    session.subject_id = files.subject_id;
    session.session_id = files.session_id;
    session.sync_offset_s = files.sync_offset_s;
    session.imu = read_imu_csv(files.imu, files.wrist);
    session.micromovements = read_micromovement_csv(files.micromovement);
    session.bites = read_annotation_csv(files.annotation);

    if (files.sync_offset_s != 0.0) {
        for (auto& s : session.imu.samples) s.t += files.sync_offset_s;
        for (auto& w : session.micromovements) w.t_start += files.sync_offset_s;
    }
    validate_session(session);
    return session;
}

std::vector<Session> load_dataset(const Manifest& manifest) {
    std::vector<Session> out;
    out.reserve(manifest.sessions.size());
    for (const auto& files : manifest.sessions) out.push_back(load_session(files));
    return out;
}

Manifest load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingFile, path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    Manifest manifest;
    try {
        for (const auto& subject : doc.at("subjects")) {
            const auto subject_id = subject.at("id").get<std::string>();
            std::size_t k = 0;
            for (const auto& entry : subject.at("sessions")) {
                SessionFiles files;
                files.subject_id = subject_id;
                files.session_id = entry.contains("id") ? entry.at("id").get<std::string>()
                                                        : subject_id + "_" + std::to_string(k);
                files.imu = resolve(base, entry.at("imu").get<std::string>());
                files.micromovement = resolve(base, entry.at("micromovement").get<std::string>());
                files.annotation = resolve(base, entry.at("annotation").get<std::string>());
                files.wrist = wrist_from_string(entry.value("wrist", std::string("right")));
                files.sync_offset_s = entry.value("sync_offset_s", 0.0);
                manifest.sessions.push_back(std::move(files));
                ++k;
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    return manifest;
}

void save_manifest(const Manifest& manifest, const fs::path& path) {
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    auto rel = [&](const fs::path& p) {
        auto r = p.lexically_proximate(base);
        return r.empty() ? p.generic_string() : r.generic_string();
    };
    json subjects = json::array();
    for (const auto& s : manifest.sessions) {
        auto it = std::find_if(subjects.begin(), subjects.end(),
                               [&](const json& j) { return j.at("id") == s.subject_id; });
        if (it == subjects.end()) {
            subjects.push_back({{"id", s.subject_id}, {"sessions", json::array()}});
            it = subjects.end() - 1;
        }
        (*it)["sessions"].push_back({{"id", s.session_id},
                                     {"imu", rel(s.imu)},
                                     {"micromovement", rel(s.micromovement)},
                                     {"annotation", rel(s.annotation)},
                                     {"wrist", to_string(s.wrist)},
                                     {"sync_offset_s", s.sync_offset_s}});
    }
    auto out = open_for_write(path);
    out << json{{"subjects", subjects}}.dump(2) << '\n';
}

SessionFiles write_session(const Session& session, const fs::path& dir) {
    SessionFiles files;
    files.subject_id = session.subject_id;
    files.session_id = session.session_id;
    files.imu = dir / (session.session_id + "_imu.csv");
    files.micromovement = dir / (session.session_id + "_micromovement.csv");
    files.annotation = dir / (session.session_id + "_annotation.csv");
    files.wrist = session.imu.wrist;
    files.sync_offset_s = session.sync_offset_s;
    write_imu_csv(session.imu, files.imu, session.sync_offset_s);
    write_micromovement_csv(session.micromovements, files.micromovement, session.sync_offset_s);
    write_annotation_csv(session.bites, files.annotation);
    return files;
}

}  // namespace biteweight
