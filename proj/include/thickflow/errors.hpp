#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace thickflow {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FluxOverflow : public Error {
 public:
  using Error::Error;
};

class VacuumError : public Error {
 public:
  using Error::Error;
};

/// Raised by the 1D implicit solves. Carries the last residual and the
/// damping factors used per iteration.
class NewtonDivergence : public Error {
 public:
  NewtonDivergence(const std::string& what, double last_residual,
                   std::vector<double> damping)
      : Error(what), last_residual(last_residual), damping(std::move(damping)) {}
  double last_residual;
  std::vector<double> damping;
};

class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

/// Raised by the 2D momentum minimization; trace holds the gradient norm per iteration.
class SolverDivergence : public Error {
 public:
  SolverDivergence(const std::string& what, std::vector<double> trace)
      : Error(what), trace(std::move(trace)) {}
  std::vector<double> trace;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line) : Error(what), line(line) {}
  int line;
};

/// Collects every validation failure, each prefixed by its field path.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : Error(join(issues)), issues(std::move(issues)) {}
  std::vector<std::string> issues;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) {
      if (!s.empty()) s += "; ";
      s += e;
    }
    return s;
  }
};

}  // namespace thickflow
