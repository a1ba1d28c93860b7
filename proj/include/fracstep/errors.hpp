#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fracstep {

enum class ErrorKind {
  Syntax,
  UnknownSymbol,
  Domain,
  DerivativeZero,
  NoRealStep,
  NonFinite,
  GammaPole,
  DegenerateBase,
  IndeterminateTarget,
  UnsupportedOrder,
  DegenerateSecant,
  DimensionTooLarge,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. `kind()` lets
/// callers branch without a cascade of catch clauses.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(ErrorKind::Syntax,
              "syntax error at position " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Raised when the step quadratic has a negative discriminant. The offending
/// discriminant travels with the exception so callers can report it.
class NoRealStepError : public Error {
 public:
  explicit NoRealStepError(double discriminant)
      : Error(ErrorKind::NoRealStep,
              "no real step: discriminant " + std::to_string(discriminant) + " < 0"),
        discriminant_(discriminant) {}

  double discriminant() const noexcept { return discriminant_; }

 private:
  double discriminant_;
};

}  // namespace fracstep
