#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace l2split {

/// Base class for every failure the library reports.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Unrecognized character while tokenizing an expression.
class LexError : public Error {
 public:
  LexError(std::size_t position, const std::string& message)
      : Error("lex error at " + std::to_string(position) + ": " + message),
        position_(position),
        message_(message) {}

  std::size_t position() const { return position_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t position_;
  std::string message_;
};

/// Malformed token stream: carries what the parser expected and where.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& expected)
      : Error("parse error at " + std::to_string(position) + ": expected " + expected),
        position_(position),
        expected_(expected) {}

  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

/// Pointwise evaluation failure: division by zero, bad domain, non-finite result.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Rejected sampled-data input (non-finite values, duplicates, too few rows).
class IngestError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain a contract requires.
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions before meeting tolerance.
/// Carries the best value reached and the outstanding error estimate.
class NotConverged : public Error {
 public:
  NotConverged(double best_value, double error_estimate)
      : Error("quadrature did not converge: best value " + std::to_string(best_value) +
              ", error estimate " + std::to_string(error_estimate)),
        best_value_(best_value),
        error_estimate_(error_estimate) {}

  double best_value() const { return best_value_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double best_value_;
  double error_estimate_;
};

/// <f,f> came back below -abs_tol: the quadrature itself is broken.
class NegativeNorm : public Error {
 public:
  using Error::Error;
};

/// Angle requested against a function whose norm is below tolerance.
class ZeroFunction : public Error {
 public:
  using Error::Error;
};

/// Collinearity classification requested for lambda = 0.
class ZeroScalar : public Error {
 public:
  using Error::Error;
};

}  // namespace l2split
