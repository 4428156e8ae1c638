#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cohscat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (e.g. Hankel function at x <= 0).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Result not representable in double precision.
class RangeError : public Error {
public:
  using Error::Error;
};

/// Evaluation point too close to a pole of a modal quantity.
class PoleError : public Error {
public:
  using Error::Error;
};

/// A linear system is singular to working precision.
class ConditioningError : public Error {
public:
  ConditioningError(const std::string& what, int mode, double rcond)
      : Error(what), mode_(mode), rcond_(rcond) {}
  /// Modal index of the offending boundary system, or -1 when not applicable.
  int mode() const noexcept { return mode_; }
  double rcond() const noexcept { return rcond_; }

private:
  int mode_;
  double rcond_;
};

/// Malformed input file or configuration; `field()` names the offending key.
class ParseError : public Error {
public:
  ParseError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residualHistory() const noexcept { return residuals_; }

private:
  std::vector<double> residuals_;
};

/// The quasi-P and quasi-SV roots coincide.
class DegenerateRootsError : public Error {
public:
  using Error::Error;
};

/// Null space of a modal system is not one-dimensional.
class AmbiguityError : public Error {
public:
  AmbiguityError(const std::string& what, double ratio) : Error(what), ratio_(ratio) {}
  /// Ratio of the second-smallest to the smallest singular value.
  double separation() const noexcept { return ratio_; }

private:
  double ratio_;
};

}  // namespace cohscat
