#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mwdisc {

enum class ErrorCode {
  NegativeEntry,
  AllZero,
  DecomposableTable,
  ZeroMargin,
  EmptySubset,
  SubsetOutsideCluster,
  IndexOutOfRange,
  NoConvergence,
  TrivialPairNotFound,
  Disconnected,
  ZeroDegree,
  RankExceeded,
  BudgetExceeded,
  KExceedsRank,
  InvalidPartition,
  ApproximationFailed,
  PreconditionViolated,
  NotStepwiseConstant,
  AlphaNotBelowOne,
  AlphaOutOfRange,
  DegenerateInput,
  EmptyClusterUnrecoverable,
  DegenerateParameters,
  InfeasibleDegrees,
  GenerationFailed,
  ParseError,
  RaggedRows,
  NonNumeric,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mwdisc
