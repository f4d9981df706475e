#include "navgeo/error.hpp"

namespace navgeo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::GradientAtZero: return "GradientAtZero";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::CurveLeftDomain: return "CurveLeftDomain";
    case ErrorKind::DegenerateNorm: return "DegenerateNorm";
    case ErrorKind::ZeroVelocity: return "ZeroVelocity";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::DegenerateWind: return "DegenerateWind";
    case ErrorKind::InconsistentVerdicts: return "InconsistentVerdicts";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::UnknownScenario: return "UnknownScenario";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace navgeo
