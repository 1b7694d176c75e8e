#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace evaluator {

enum class ErrorCode {
    InvalidTrajectory,
    DegenerateSplit,
    OutOfRange,
    SingleClassData,
    DimensionMismatch,
    LengthMismatch,
    NoOverlap,
    EmptyPrefix,
    NoNullTrajectories,
    InsufficientCalibration,
    MonitorClosed,
    MissingTokens,
    ParseError,
    Usage,
    Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Raised when n null samples cannot certify (alpha, delta). Carries the
// smallest sample count that would.
class InsufficientCalibration : public Error {
public:
    InsufficientCalibration(const std::string& message, std::int64_t min_n)
        : Error(ErrorCode::InsufficientCalibration, message), min_n_(min_n) {}

    std::int64_t min_required() const noexcept { return min_n_; }

private:
    std::int64_t min_n_;
};

}  // namespace evaluator
