#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bessel {

enum class ErrorCode {
  BoundaryPoint,
  MissingNu,
  SizeOutOfRange,
  AlphaOutOfRange,
  NoConvergence,
  StepFailure,
  UnsupportedRegime,
  ConfigInvalid,
  GridMismatch,
  ShapeError,
};

constexpr std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BoundaryPoint: return "BOUNDARY_POINT";
    case ErrorCode::MissingNu: return "MISSING_NU";
    case ErrorCode::SizeOutOfRange: return "SIZE_OUT_OF_RANGE";
    case ErrorCode::AlphaOutOfRange: return "ALPHA_OUT_OF_RANGE";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::StepFailure: return "STEP_FAILURE";
    case ErrorCode::UnsupportedRegime: return "UNSUPPORTED_REGIME";
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::GridMismatch: return "GRID_MISMATCH";
    case ErrorCode::ShapeError: return "SHAPE_ERROR";
  }
  return "UNKNOWN";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bessel
