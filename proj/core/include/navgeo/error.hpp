#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace navgeo {

enum class ErrorKind {
  NotPositiveDefinite,
  NonFiniteState,
  SyntaxError,
  UnknownIdentifier,
  ArityError,
  DomainError,
  NonFinite,
  GradientAtZero,
  ZeroVector,
  CurveLeftDomain,
  DegenerateNorm,
  ZeroVelocity,
  NotClosed,
  DegenerateWind,
  InconsistentVerdicts,
  ParseError,
  ValidationError,
  UnknownScenario,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type. `offset` is set for
// expression syntax errors (byte offset into the source text).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        detail_(what),
        offset_(offset) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }
  // Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
  std::optional<std::size_t> offset_;
};

}  // namespace navgeo
