#include "evaluator/error.hpp"

namespace evaluator {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidTrajectory: return "InvalidTrajectory";
        case ErrorCode::DegenerateSplit: return "DegenerateSplit";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::SingleClassData: return "SingleClassData";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NoOverlap: return "NoOverlap";
        case ErrorCode::EmptyPrefix: return "EmptyPrefix";
        case ErrorCode::NoNullTrajectories: return "NoNullTrajectories";
        case ErrorCode::InsufficientCalibration: return "InsufficientCalibration";
        case ErrorCode::MonitorClosed: return "MonitorClosed";
        case ErrorCode::MissingTokens: return "MissingTokens";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::Usage: return "Usage";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace evaluator
