#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace invasion {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kConfig,              // malformed or inconsistent configuration
  kConstraint,          // parameters violate model admissibility
  kDomain,              // argument outside a function's domain
  kPrecondition,        // call made outside the regime an operation supports
  kConvergence,         // iterative procedure did not converge
  kNumericalBlowup,     // NaN/Inf or overflow detected
  kFrontLost,           // no level crossing in a tracked field
  kFit,                 // not enough data for a least-squares fit
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : Error(ErrorKind::kConfig, what), line_(line) {}
  /// 1-based line of the offending entry, 0 when not tied to a line.
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ConstraintViolation : public Error {
 public:
  explicit ConstraintViolation(const std::string& what)
      : Error(ErrorKind::kConstraint, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::kDomain, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::kPrecondition, what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_difference)
      : Error(ErrorKind::kConvergence, what), last_difference_(last_difference) {}
  double last_difference() const noexcept { return last_difference_; }

 private:
  double last_difference_;
};

class NumericalBlowup : public Error {
 public:
  NumericalBlowup(const std::string& what, std::int64_t step_index)
      : Error(ErrorKind::kNumericalBlowup, what), step_index_(step_index) {}
  /// Time step at which the failure was detected (-1 if not a stepping error).
  std::int64_t step_index() const noexcept { return step_index_; }

 private:
  std::int64_t step_index_;
};

class FrontLost : public Error {
 public:
  explicit FrontLost(const std::string& what) : Error(ErrorKind::kFrontLost, what) {}
};

class FitError : public Error {
 public:
  explicit FitError(const std::string& what) : Error(ErrorKind::kFit, what) {}
};

}  // namespace invasion
