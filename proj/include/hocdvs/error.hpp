#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hocdvs {

enum class ErrorCode {
    EmptySequence,
    LengthMismatch,
    NotCentered,
    LagTooLarge,
    NonPositiveNoise,
    NegativeSignal,
    ZeroSignal,
    PowerMismatch,
    DegenerateNoiseReference,
    BadRange,
    EmptyRequest,
    BadInterval,
    BadSquareWave,
    BadConfig,
    MissingKey,
    UnknownKey,
    TooFewTraces,
    BadWindow,
    WindowExceedsTraces,
    NotDetrended,
    BadAverageLength,
    NoPeak,
    BadGuard,
    ZeroBackground,
    NoEdge,
    IoError,
    NotATraceFile,
    CorruptHeader,
    TruncatedPayload,
    UnknownPreset,
    BadSeedRange,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the library surfaces as this exception; `code()` is the
/// machine-readable reason, `what()` carries context for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hocdvs
