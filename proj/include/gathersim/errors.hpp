#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gathersim {

enum class ErrorCode {
    ScheduleUnderrun,
    DegenerateLine,
    NoCatchup,
    Infeasible,
    OracleExhausted,
    DivisionByZero,
    IrrationalValue,
    InvalidArgument,
    Validation,
    Io,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gathersim
