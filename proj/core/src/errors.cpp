#include "membrana/errors.hpp"

#include <sstream>

namespace membrana {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidBounds: return "InvalidBounds";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularOperator: return "SingularOperator";
    case ErrorCode::InvalidShift: return "InvalidShift";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonPositiveEigenvector: return "NonPositiveEigenvector";
    case ErrorCode::GateFailed: return "GateFailed";
    case ErrorCode::NegativeIterate: return "NegativeIterate";
    case ErrorCode::BracketFailed: return "BracketFailed";
    case ErrorCode::FitFailed: return "FitFailed";
    case ErrorCode::NonPositiveU: return "NonPositiveU";
    case ErrorCode::ExpressionSyntax: return "ExpressionSyntax";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {
std::string gate_message(double eigenvalue) {
  std::ostringstream os;
  os.precision(17);
  os << "no positive solution, gate eigenvalue " << eigenvalue << " >= 0";
  return os.str();
}
}  // namespace

GateFailed::GateFailed(double eigenvalue)
    : Error(ErrorCode::GateFailed, gate_message(eigenvalue)), eigenvalue_(eigenvalue) {}

}  // namespace membrana
