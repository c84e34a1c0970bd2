#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tgd {

enum class ErrorCode {
    InvalidParam,
    NonPositiveSupport,
    UnsupportedMoment,
    ConstraintViolation,
    DegenerateSize,
    SampleTooCoarse,
    SignalTooShort,
    EmptySignal,
    UnsupportedDims,
    DimsMismatch,
    FieldTooSmall,
    NotSeparable,
    ShapeMismatch,
    Io,
    Usage,
    MissingSeed,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidParam: return "InvalidParam";
        case ErrorCode::NonPositiveSupport: return "NonPositiveSupport";
        case ErrorCode::UnsupportedMoment: return "UnsupportedMoment";
        case ErrorCode::ConstraintViolation: return "ConstraintViolation";
        case ErrorCode::DegenerateSize: return "DegenerateSize";
        case ErrorCode::SampleTooCoarse: return "SampleTooCoarse";
        case ErrorCode::SignalTooShort: return "SignalTooShort";
        case ErrorCode::EmptySignal: return "EmptySignal";
        case ErrorCode::UnsupportedDims: return "UnsupportedDims";
        case ErrorCode::DimsMismatch: return "DimsMismatch";
        case ErrorCode::FieldTooSmall: return "FieldTooSmall";
        case ErrorCode::NotSeparable: return "NotSeparable";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Usage: return "Usage";
        case ErrorCode::MissingSeed: return "MissingSeed";
    }
    return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace tgd
