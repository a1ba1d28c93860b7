#include "fracstep/errors.hpp"

namespace fracstep {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::DerivativeZero: return "DerivativeZero";
    case ErrorKind::NoRealStep: return "NoRealStep";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::GammaPole: return "GammaPole";
    case ErrorKind::DegenerateBase: return "DegenerateBase";
    case ErrorKind::IndeterminateTarget: return "IndeterminateTarget";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::DegenerateSecant: return "DegenerateSecant";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace fracstep
