#include "jts/error.hpp"

namespace jts {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PrecisionUnderflow: return "PrecisionUnderflow";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::TailNotConverged: return "TailNotConverged";
    case ErrorCode::CrossCheckFailed: return "CrossCheckFailed";
    case ErrorCode::WindowUntrusted: return "WindowUntrusted";
    case ErrorCode::BracketingIncomplete: return "BracketingIncomplete";
    case ErrorCode::OutsideTrustRadius: return "OutsideTrustRadius";
    case ErrorCode::DivergentTail: return "DivergentTail";
    case ErrorCode::SignInconsistency: return "SignInconsistency";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::MassDeficit: return "MassDeficit";
    case ErrorCode::BreakdownAtStep: return "BreakdownAtStep";
    case ErrorCode::InconsistentTauEstimates: return "InconsistentTauEstimates";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::SamplePointTooCloseToNode: return "SamplePointTooCloseToNode";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::NotLimitCircle: return "NotLimitCircle";
    case ErrorCode::InvariantViolated: return "InvariantViolated";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::HypothesisViolated:
    case ErrorCode::NotLimitCircle:
    case ErrorCode::PreconditionViolated:
    case ErrorCode::InvalidMatrix:
    case ErrorCode::NonPositiveWeight:
    case ErrorCode::SignInconsistency:
    case ErrorCode::MassDeficit:
      return 2;
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
      return 4;
    default:
      return 3;
  }
}

}  // namespace jts
