#pragma once

#include <stdexcept>
#include <string>

namespace padmm {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite data or mismatched dimensions.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Factorization met a non-positive pivot.
class SingularOperatorError : public Error {
 public:
  SingularOperatorError(int pivot, double value)
      : Error("singular operator: pivot " + std::to_string(pivot) +
              " is not positive (" + std::to_string(value) + ")"),
        pivot_(pivot) {}
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

/// Iterative method exhausted its iteration cap.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double residual)
      : Error(what + " (final residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Malformed problem file; line numbers are 1-based.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace padmm
