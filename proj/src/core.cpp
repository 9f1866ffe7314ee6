#include "core.hpp"

namespace stickperc {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::ParallelLines: return "ParallelLines";
        case ErrorCode::InsufficientTrials: return "InsufficientTrials";
        case ErrorCode::RejectionStall: return "RejectionStall";
        case ErrorCode::CapacityExceeded: return "CapacityExceeded";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::DegenerateDesign: return "DegenerateDesign";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace stickperc
