#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperlift {

enum class ErrorKind {
  NotHyperbolic,
  NotHyperbolicAt,
  NotInImageAt,
  UnresolvedCollision,
  SyntaxError,
  DomainError,
  EvalError,
  InvalidWindow,
  GridTooCoarse,
  UnsupportedParameter,
  DimensionMismatch,
  EnumerationTooLarge,
  ToleranceViolation,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` carries the category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the expression parser; `position()` is a 0-based byte offset.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error(ErrorKind::SyntaxError, what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Failure tied to a time value: evaluation errors, hyperbolicity or image
/// violations along a curve.
class TimedError : public Error {
 public:
  TimedError(ErrorKind kind, double t, const std::string& what)
      : Error(kind, what + " at t=" + std::to_string(t)), t_(t) {}

  double t() const noexcept { return t_; }

 private:
  double t_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::NotHyperbolicAt: return "NotHyperbolicAt";
    case ErrorKind::NotInImageAt: return "NotInImageAt";
    case ErrorKind::UnresolvedCollision: return "UnresolvedCollision";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::EvalError: return "EvalError";
    case ErrorKind::InvalidWindow: return "InvalidWindow";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::UnsupportedParameter: return "UnsupportedParameter";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::ToleranceViolation: return "ToleranceViolation";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace hyperlift
