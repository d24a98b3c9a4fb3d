#pragma once

// Exception hierarchy. Every failure mode of the library maps onto one of
// three branches so callers (and the command-line tool's exit codes) can
// distinguish bad inputs, numerical breakdowns, and failed consistency checks.

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace sqrtwell {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument or parameter outside an operation's stated domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerical method could not produce a trustworthy value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Evaluation at, or within the detection window of, a pole. Carries the
// offending argument (e.g. the gamma argument or the degenerate lower
// parameter of a hypergeometric series).
class PoleError : public NumericalError {
 public:
  PoleError(const std::string& msg, std::complex<double> argument)
      : NumericalError(msg), argument_(argument) {}
  std::complex<double> argument() const { return argument_; }

 private:
  std::complex<double> argument_;
};

// A series did not meet its tail bound within the term cap.
class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Parameters hit a special value that the requested representation cannot
// handle (for example a two-term Gauss combination whose lower parameter
// degenerates to a non-positive integer).
class DegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A computed result failed an internal consistency requirement.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Expected and located counts disagree (roots, nodes, jumps). Carries a
// machine-readable diagnostic trace of the failed search.
class CountMismatchError : public ValidationError {
 public:
  CountMismatchError(const std::string& msg, std::string diagnostic)
      : ValidationError(msg), diagnostic_(std::move(diagnostic)) {}
  const std::string& diagnostic() const { return diagnostic_; }

 private:
  std::string diagnostic_;
};

// Sampling too coarse for the requested quadrature or detection accuracy.
class GridError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A least-squares far-field fit exceeded its residual tolerance.
class FitError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace sqrtwell
