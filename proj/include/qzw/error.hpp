#pragma once

#include <stdexcept>
#include <string>

namespace qzw {

enum class ErrorCode {
    InvalidArgument,
    BadOrder,
    SizeMismatch,
    ZeroArgument,
    Nonconvergent,
    PoleInC,
    PoleInDenominator,
    PoleAtPoint,
    InvalidParams,
    DuplicatePoints,
    BudgetExceeded,
    WindowTooSmall,
    NoConvergentRepresentation,
    NegativeUnderSqrt,
    QuadratureDisagreement,
    HypothesisViolated,
    PrefixTooShort,
    ConfigError,
    CheckFailed,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

} // namespace qzw
