#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace soliton {

enum class ErrorCode {
  MuZero,
  NotSteady,
  NonpositiveA,
  StepFailure,
  Domain,
  NotSmoothOrigin,
  WindowEmpty,
  Edge,
  UnresolvedEnd,
  Range,
  ZeroCurvature,
  Window,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::MuZero: return "MU_ZERO";
    case ErrorCode::NotSteady: return "NOT_STEADY";
    case ErrorCode::NonpositiveA: return "NONPOSITIVE_A";
    case ErrorCode::StepFailure: return "STEP_FAILURE";
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::NotSmoothOrigin: return "NOT_SMOOTH_ORIGIN";
    case ErrorCode::WindowEmpty: return "WINDOW_EMPTY";
    case ErrorCode::Edge: return "EDGE";
    case ErrorCode::UnresolvedEnd: return "UNRESOLVED_END";
    case ErrorCode::Range: return "RANGE";
    case ErrorCode::ZeroCurvature: return "ZERO_CURVATURE";
    case ErrorCode::Window: return "WINDOW";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Numerical (as opposed to input) failures: exit code 2 in the CLI.
constexpr bool is_numerical_failure(ErrorCode c) {
  return c == ErrorCode::StepFailure || c == ErrorCode::UnresolvedEnd;
}

}  // namespace soliton
