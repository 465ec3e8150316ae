#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace preq {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. Carries the byte offset of the failure.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Variable reference outside q1..qn / p1..pn, or an unknown identifier.
class UnknownVariable : public Error {
 public:
  using Error::Error;
};

/// Identifier applied like a function but not in {sin, cos, exp, sqrt, ln}.
class UnknownFunction : public Error {
 public:
  using Error::Error;
};

/// '^' exponent that does not fold to an integer constant.
class NonIntegerExponent : public Error {
 public:
  using Error::Error;
};

/// Evaluation left the real domain (division by zero, ln of a non-positive
/// value, sqrt of a negative value). Carries the offending subexpression.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : Error(what + ": " + subexpression),
        subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// Vector/matrix dimensions do not match.
class DimMismatch : public Error {
 public:
  using Error::Error;
};

/// Stormer-Verlet requested without a valid separable split H = T(p) + V(q).
class NonSeparable : public Error {
 public:
  using Error::Error;
};

/// An iteration hit its cap before reaching the required residual.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Simpson quadrature needs an odd number of grid points per axis.
class EvenGridError : public Error {
 public:
  using Error::Error;
};

/// Section passed to the symmetry check lacks a decaying exp factor.
class NonDecayingSection : public Error {
 public:
  using Error::Error;
};

/// Scenario / spec file failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace preq
