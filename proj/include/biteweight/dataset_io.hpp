#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "biteweight/types.hpp"

namespace biteweight {

inline constexpr const char* kImuHeader = "t,ax,ay,az,gx,gy,gz";
inline constexpr const char* kMicromovementHeader = "index,t_start,p,u,m,d,n";
inline constexpr const char* kAnnotationHeader = "bite_id,start_s,end_s,weight_g";

/// One session entry of a manifest, with paths already resolved.
struct SessionFiles {
    std::string subject_id;
    std::string session_id;
    std::filesystem::path imu;
    std::filesystem::path micromovement;
    std::filesystem::path annotation;
    Wrist wrist = Wrist::Right;
    double sync_offset_s = 0.0;
};

struct Manifest {
    std::vector<SessionFiles> sessions;
};

/// Relative paths inside the manifest are resolved against its directory.
Manifest load_manifest(const std::filesystem::path& path);
/// Writes paths relative to the manifest's directory when possible.
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

// Raw readers. Values are validated for finiteness; times are returned
// exactly as written in the file (IMU clock).
ImuStream read_imu_csv(const std::filesystem::path& path, Wrist wrist);
std::vector<MicromovementWindow> read_micromovement_csv(const std::filesystem::path& path);
std::vector<BiteAnnotation> read_annotation_csv(const std::filesystem::path& path);

// `time_shift` is subtracted from every timestamp before writing, which
// converts annotation-clock streams back to the IMU clock.
void write_imu_csv(const ImuStream& stream, const std::filesystem::path& path, double time_shift = 0.0);
void write_micromovement_csv(const std::vector<MicromovementWindow>& windows, const std::filesystem::path& path,
                             double time_shift = 0.0);
void write_annotation_csv(const std::vector<BiteAnnotation>& bites, const std::filesystem::path& path);

/// Parses the three files, moves IMU and micromovement timestamps onto the
/// annotation clock by adding the sync offset, and validates the result.
Session load_session(const SessionFiles& files);
std::vector<Session> load_dataset(const Manifest& manifest);

/// Writes the three CSVs of `session` into `dir` and returns the entry that
/// reloads it.
SessionFiles write_session(const Session& session, const std::filesystem::path& dir);

}  // namespace biteweight
