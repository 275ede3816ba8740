#pragma once

#include <stdexcept>
#include <string>

namespace nullcurve {

enum class ErrorCode {
    NotNullCurve,
    DegenerateAcceleration,
    NotCartan,
    ZeroTorsion,
    OutOfRange,
    InsufficientSamples,
    DriftExceeded,
    DomainError,
    QuadratureError,
    InsufficientOverlap,
    RecoveryInconsistent,
    InvalidParams,
    ParseError,
    IoError,
};

inline const char* error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NotNullCurve:           return "NotNullCurve";
    case ErrorCode::DegenerateAcceleration: return "DegenerateAcceleration";
    case ErrorCode::NotCartan:              return "NotCartan";
    case ErrorCode::ZeroTorsion:            return "ZeroTorsion";
    case ErrorCode::OutOfRange:             return "OutOfRange";
    case ErrorCode::InsufficientSamples:    return "InsufficientSamples";
    case ErrorCode::DriftExceeded:          return "DriftExceeded";
    case ErrorCode::DomainError:            return "DomainError";
    case ErrorCode::QuadratureError:        return "QuadratureError";
    case ErrorCode::InsufficientOverlap:    return "InsufficientOverlap";
    case ErrorCode::RecoveryInconsistent:   return "RecoveryInconsistent";
    case ErrorCode::InvalidParams:          return "InvalidParams";
    case ErrorCode::ParseError:             return "ParseError";
    case ErrorCode::IoError:                return "IoError";
    }
    return "Unknown";
}

/**
Exception carrying a machine-readable error code alongside the message.
The CLI prints these as "ERROR <code>: <detail>" and exits with status 2.
*/
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
          code_(code), detail_(detail) {}

    ErrorCode code() const { return code_; }
    const std::string& detail() const { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace nullcurve
