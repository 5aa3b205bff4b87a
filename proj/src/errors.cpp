#include "carleman/errors.hpp"

namespace carleman {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::OrderBudgetExceeded: return "OrderBudgetExceeded";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::InsufficientNegativeScales: return "InsufficientNegativeScales";
        case ErrorCode::MalformedConfig: return "MalformedConfig";
        case ErrorCode::NonSquareMatrix: return "NonSquareMatrix";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::UnknownPreset: return "UnknownPreset";
        case ErrorCode::ConditionFails: return "ConditionFails";
        case ErrorCode::RankDeficiency: return "RankDeficiency";
        case ErrorCode::ReconstructionFailure: return "ReconstructionFailure";
        case ErrorCode::NotUnitVector: return "NotUnitVector";
        case ErrorCode::ScheduleExhausted: return "ScheduleExhausted";
        case ErrorCode::ScheduleExceeded: return "ScheduleExceeded";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::CertificateViolation: return "CertificateViolation";
        case ErrorCode::InconsistentPairing: return "InconsistentPairing";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::IoFailure: return "IoFailure";
    }
    return "UnknownError";
}

} // namespace carleman
