#include "gathersim/errors.hpp"

namespace gathersim {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ScheduleUnderrun: return "SCHEDULE_UNDERRUN";
        case ErrorCode::DegenerateLine: return "DEGENERATE_LINE";
        case ErrorCode::NoCatchup: return "NO_CATCHUP";
        case ErrorCode::Infeasible: return "INFEASIBLE";
        case ErrorCode::OracleExhausted: return "ORACLE_EXHAUSTED";
        case ErrorCode::DivisionByZero: return "DIVISION_BY_ZERO";
        case ErrorCode::IrrationalValue: return "IRRATIONAL_VALUE";
        case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
        case ErrorCode::Validation: return "VALIDATION";
        case ErrorCode::Io: return "IO";
    }
    return "UNKNOWN";
}

}  // namespace gathersim
