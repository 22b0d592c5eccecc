#include "smw/error.hpp"

namespace smw {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AsymmetricWeight: return "AsymmetricWeight";
    case ErrorCode::IndefiniteWeight: return "IndefiniteWeight";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::NotNonnegativeWeights: return "NotNonnegativeWeights";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::SingularCoupling: return "SingularCoupling";
    case ErrorCode::DegenerateCoupling: return "DegenerateCoupling";
    case ErrorCode::ZeroTheta: return "ZeroTheta";
    case ErrorCode::NotContracting: return "NotContracting";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ScheduleExhausted: return "ScheduleExhausted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace smw
