#pragma once

#include <stdexcept>
#include <string>

namespace membrana {

enum class ErrorCode {
  InvalidBounds,
  TooFewNodes,
  DimensionMismatch,
  InvalidArgument,
  SingularOperator,
  InvalidShift,
  NoConvergence,
  NonPositiveEigenvector,
  GateFailed,
  NegativeIterate,
  BracketFailed,
  FitFailed,
  NonPositiveU,
  ExpressionSyntax,
};

const char* to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code lets
/// callers (the CLI in particular) map failures onto exit statuses without
/// string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a positive steady state is requested but the principal
/// eigenvalue gate says none exists.
class GateFailed : public Error {
 public:
  explicit GateFailed(double eigenvalue);

  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

}  // namespace membrana
