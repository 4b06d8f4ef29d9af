#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geored {

// Root of the library's error hierarchy. Every throw site uses one of the
// subclasses below so callers (and the CLI exit-code mapping) can dispatch
// on the failure class.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed expression source. `offset` is a byte position into the input.
class SyntaxError : public Error {
public:
  SyntaxError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// Identifier that is neither a chart coordinate, a built-in constant, nor a
// known function.
class UnknownSymbol : public SyntaxError {
public:
  UnknownSymbol(const std::string& name, std::size_t offset)
      : SyntaxError("unknown symbol '" + name + "'", offset) {}
};

// Evaluation left the function's domain: log of a non-positive value,
// division by zero, sqrt of a negative, or a non-finite result.
class DomainError : public Error {
public:
  using Error::Error;
};

class ChartMismatch : public Error {
public:
  using Error::Error;
};

class SingularFrame : public Error {
public:
  using Error::Error;
};

class SingularMatrix : public Error {
public:
  using Error::Error;
};

class SingularMetric : public Error {
public:
  using Error::Error;
};

// metric_gradient residual is not proportional to the metric.
class NotProportional : public Error {
public:
  using Error::Error;
};

class NonPositiveFactor : public Error {
public:
  using Error::Error;
};

class NotTimelike : public Error {
public:
  using Error::Error;
};

class NotUnit : public Error {
public:
  using Error::Error;
};

class SingularProjection : public Error {
public:
  using Error::Error;
};

class UnsupportedSpec : public Error {
public:
  using Error::Error;
};

class ManifestError : public Error {
public:
  using Error::Error;
};

class MissingContext : public Error {
public:
  using Error::Error;
};

// Constructor invariant violations (shape, symmetry, declared signature).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

}  // namespace geored
