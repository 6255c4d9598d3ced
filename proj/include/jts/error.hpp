#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace jts {

enum class ErrorCode {
  PrecisionUnderflow,
  IndexOutOfRange,
  InvalidMatrix,
  TailNotConverged,
  CrossCheckFailed,
  WindowUntrusted,
  BracketingIncomplete,
  OutsideTrustRadius,
  DivergentTail,
  SignInconsistency,
  NonPositiveWeight,
  MassDeficit,
  BreakdownAtStep,
  InconsistentTauEstimates,
  PreconditionViolated,
  TooFewNodes,
  SamplePointTooCloseToNode,
  HypothesisViolated,
  NotLimitCircle,
  InvariantViolated,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code);

// Process exit status for the CLI: 2 validation, 3 numeric, 4 I/O or parse.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message, std::string condition = {},
        std::optional<long> index = std::nullopt)
    : std::runtime_error(message), code_(code), condition_(std::move(condition)), index_(index) {}

  ErrorCode code() const { return code_; }
  // Short content name of the violated requirement, e.g. "sign-constancy"; may be empty.
  const std::string& condition() const { return condition_; }
  const std::optional<long>& index() const { return index_; }

private:
  ErrorCode code_;
  std::string condition_;
  std::optional<long> index_;
};

}  // namespace jts
