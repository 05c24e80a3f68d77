#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperheat {

enum class ErrorCode {
  DimensionOutOfRange,
  DomainError,
  NonpositiveTime,
  EvenDimensionUnsupported,
  QuadratureNonconvergence,
  DegenerateGrid,
  InstabilityDetected,
  HorizonViolation,
  GridMismatch,
  EmptyRegion,
  MassDeficit,
  OutOfCone,
  NonintegrableData,
  UnknownExperiment,
  UsageError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

  /// 2 for usage/validation problems, 1 for runtime and I/O failures.
  int exit_code() const noexcept;

 private:
  ErrorCode code_;
};

}  // namespace hyperheat
