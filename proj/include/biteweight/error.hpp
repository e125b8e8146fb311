#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace biteweight {

enum class ErrorCode {
    MissingFile,
    ParseError,
    InvariantViolation,
    UnknownBite,
    TooFewSamples,
    InvalidParams,
    StreamTooShort,
    InvalidOrder,
    NoMouthEvent,
    EmptyBite,
    NoWindows,
    EmptyMatrix,
    NotConverged,
    EmptyTraining,
    TooFewSubjects,
    EmptyIntersection,
    MismatchedBiteSets,
    InvalidProfile,
    NoReportsFound,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (tests, the CLI) can branch on the kind without parsing text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace biteweight
