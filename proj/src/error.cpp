#include "hyperheat/error.hpp"

namespace hyperheat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionOutOfRange: return "dimension-out-of-range";
    case ErrorCode::DomainError: return "domain-error";
    case ErrorCode::NonpositiveTime: return "nonpositive-time";
    case ErrorCode::EvenDimensionUnsupported: return "even-dimension-unsupported";
    case ErrorCode::QuadratureNonconvergence: return "quadrature-nonconvergence";
    case ErrorCode::DegenerateGrid: return "degenerate-grid";
    case ErrorCode::InstabilityDetected: return "instability-detected";
    case ErrorCode::HorizonViolation: return "horizon-violation";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::EmptyRegion: return "empty-region";
    case ErrorCode::MassDeficit: return "mass-deficit";
    case ErrorCode::OutOfCone: return "out-of-cone";
    case ErrorCode::NonintegrableData: return "nonintegrable-data";
    case ErrorCode::UnknownExperiment: return "unknown-experiment";
    case ErrorCode::UsageError: return "usage-error";
    case ErrorCode::IoError: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

int Error::exit_code() const noexcept {
  switch (code_) {
    case ErrorCode::DimensionOutOfRange:
    case ErrorCode::DomainError:
    case ErrorCode::NonpositiveTime:
    case ErrorCode::EvenDimensionUnsupported:
    case ErrorCode::DegenerateGrid:
    case ErrorCode::OutOfCone:
    case ErrorCode::UnknownExperiment:
    case ErrorCode::UsageError:
      return 2;
    default:
      return 1;
  }
}

}  // namespace hyperheat
