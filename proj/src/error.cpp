#include "polyint/error.hpp"

namespace polyint {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionOutOfRange: return "DimensionOutOfRange";
    case ErrorCode::OrderOutOfRange: return "OrderOutOfRange";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::OriginNotInterior: return "OriginNotInterior";
    case ErrorCode::PointNotInterior: return "PointNotInterior";
    case ErrorCode::TOutOfRange: return "TOutOfRange";
    case ErrorCode::OddM: return "OddM";
    case ErrorCode::IntegerOrder: return "IntegerOrder";
    case ErrorCode::InsufficientTaylor: return "InsufficientTaylor";
    case ErrorCode::EndpointSingularity: return "EndpointSingularity";
    case ErrorCode::DegenerateGrid: return "DegenerateGrid";
    case ErrorCode::NonStarShaped: return "NonStarShaped";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::NumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonStarShaped:
    case ErrorCode::NonIntegrable:
    case ErrorCode::NumericFailure:
      return false;
    default:
      return true;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace polyint
