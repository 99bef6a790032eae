#include "mwdisc/error.hpp"

namespace mwdisc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::DecomposableTable: return "DecomposableTable";
    case ErrorCode::ZeroMargin: return "ZeroMargin";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::SubsetOutsideCluster: return "SubsetOutsideCluster";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::TrivialPairNotFound: return "TrivialPairNotFound";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::ZeroDegree: return "ZeroDegree";
    case ErrorCode::RankExceeded: return "RankExceeded";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::KExceedsRank: return "KExceedsRank";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::ApproximationFailed: return "ApproximationFailed";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotStepwiseConstant: return "NotStepwiseConstant";
    case ErrorCode::AlphaNotBelowOne: return "AlphaNotBelowOne";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EmptyClusterUnrecoverable: return "EmptyClusterUnrecoverable";
    case ErrorCode::DegenerateParameters: return "DegenerateParameters";
    case ErrorCode::InfeasibleDegrees: return "InfeasibleDegrees";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonNumeric: return "NonNumeric";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace mwdisc
