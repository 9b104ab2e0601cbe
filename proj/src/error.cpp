#include "hocdvs/error.hpp"

namespace hocdvs {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptySequence: return "EmptySequence";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NotCentered: return "NotCentered";
        case ErrorCode::LagTooLarge: return "LagTooLarge";
        case ErrorCode::NonPositiveNoise: return "NonPositiveNoise";
        case ErrorCode::NegativeSignal: return "NegativeSignal";
        case ErrorCode::ZeroSignal: return "ZeroSignal";
        case ErrorCode::PowerMismatch: return "PowerMismatch";
        case ErrorCode::DegenerateNoiseReference: return "DegenerateNoiseReference";
        case ErrorCode::BadRange: return "BadRange";
        case ErrorCode::EmptyRequest: return "EmptyRequest";
        case ErrorCode::BadInterval: return "BadInterval";
        case ErrorCode::BadSquareWave: return "BadSquareWave";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::MissingKey: return "MissingKey";
        case ErrorCode::UnknownKey: return "UnknownKey";
        case ErrorCode::TooFewTraces: return "TooFewTraces";
        case ErrorCode::BadWindow: return "BadWindow";
        case ErrorCode::WindowExceedsTraces: return "WindowExceedsTraces";
        case ErrorCode::NotDetrended: return "NotDetrended";
        case ErrorCode::BadAverageLength: return "BadAverageLength";
        case ErrorCode::NoPeak: return "NoPeak";
        case ErrorCode::BadGuard: return "BadGuard";
        case ErrorCode::ZeroBackground: return "ZeroBackground";
        case ErrorCode::NoEdge: return "NoEdge";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::NotATraceFile: return "NotATraceFile";
        case ErrorCode::CorruptHeader: return "CorruptHeader";
        case ErrorCode::TruncatedPayload: return "TruncatedPayload";
        case ErrorCode::UnknownPreset: return "UnknownPreset";
        case ErrorCode::BadSeedRange: return "BadSeedRange";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace hocdvs
