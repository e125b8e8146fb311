#include "biteweight/error.hpp"

namespace biteweight {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingFile: return "MissingFile";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::UnknownBite: return "UnknownBite";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::StreamTooShort: return "StreamTooShort";
        case ErrorCode::InvalidOrder: return "InvalidOrder";
        case ErrorCode::NoMouthEvent: return "NoMouthEvent";
        case ErrorCode::EmptyBite: return "EmptyBite";
        case ErrorCode::NoWindows: return "NoWindows";
        case ErrorCode::EmptyMatrix: return "EmptyMatrix";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::EmptyTraining: return "EmptyTraining";
        case ErrorCode::TooFewSubjects: return "TooFewSubjects";
        case ErrorCode::EmptyIntersection: return "EmptyIntersection";
        case ErrorCode::MismatchedBiteSets: return "MismatchedBiteSets";
        case ErrorCode::InvalidProfile: return "InvalidProfile";
        case ErrorCode::NoReportsFound: return "NoReportsFound";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace biteweight
