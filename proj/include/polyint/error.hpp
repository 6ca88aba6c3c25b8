#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyint {

enum class ErrorCode {
  // Input validation.
  DimensionOutOfRange,
  OrderOutOfRange,
  InvalidSpec,
  OriginNotInterior,
  PointNotInterior,
  TOutOfRange,
  OddM,
  IntegerOrder,
  InsufficientTaylor,
  EndpointSingularity,
  DegenerateGrid,
  // Numerical failure.
  NonStarShaped,
  NonIntegrable,
  NumericFailure,
};

std::string_view error_name(ErrorCode code);

/// True for codes that signal bad input rather than a failed computation.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace polyint
