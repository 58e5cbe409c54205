#include "qzw/error.hpp"

namespace qzw {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
    case ErrorCode::Nonconvergent: return "Nonconvergent";
    case ErrorCode::PoleInC: return "PoleInC";
    case ErrorCode::PoleInDenominator: return "PoleInDenominator";
    case ErrorCode::PoleAtPoint: return "PoleAtPoint";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::NoConvergentRepresentation: return "NoConvergentRepresentation";
    case ErrorCode::NegativeUnderSqrt: return "NegativeUnderSqrt";
    case ErrorCode::QuadratureDisagreement: return "QuadratureDisagreement";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::PrefixTooShort: return "PrefixTooShort";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::CheckFailed: return "CheckFailed";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace qzw
