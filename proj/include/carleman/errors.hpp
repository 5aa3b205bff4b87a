#pragma once

#include <stdexcept>
#include <string>

namespace carleman {

// Error categories used across the pipeline. Each maps to a CLI exit class:
// config problems exit with 3, everything else that aborts a run exits with 1.
enum class ErrorCode {
    OrderBudgetExceeded,
    BudgetExceeded,
    InsufficientNegativeScales,
    MalformedConfig,
    NonSquareMatrix,
    DimensionMismatch,
    UnknownPreset,
    ConditionFails,
    RankDeficiency,
    ReconstructionFailure,
    NotUnitVector,
    ScheduleExhausted,
    ScheduleExceeded,
    ConvergenceFailure,
    CertificateViolation,
    InconsistentPairing,
    GridMismatch,
    IoFailure,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    bool is_config_error() const noexcept {
        return code_ == ErrorCode::MalformedConfig || code_ == ErrorCode::UnknownPreset ||
               code_ == ErrorCode::NonSquareMatrix;
    }

private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

} // namespace carleman
