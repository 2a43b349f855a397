#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bootcopula {

/// Coarse classification used by callers (the CLI maps it onto exit codes).
enum class ErrorKind {
  invalid_argument,     ///< malformed input or violated precondition
  domain,               ///< argument outside a function's mathematical domain
  fit_failure,          ///< quantile fit did not converge
  invalid_correlation,  ///< correlation matrix failed validation
  syntax,               ///< expression could not be parsed
  evaluation,           ///< expression evaluation failed for one set of inputs
  non_finite_draw,      ///< a bootstrap draw produced a non-finite combined value
  uninformative_test,   ///< sensitivity + specificity <= 1
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error(ErrorKind::invalid_argument, message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(ErrorKind::domain, message) {}
};

class FitError : public Error {
 public:
  FitError(const std::string& message, double best_residual)
      : Error(ErrorKind::fit_failure, message), best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

class CorrelationError : public Error {
 public:
  enum class Violation { shape, non_finite, asymmetric, diagonal_not_unit, out_of_range, not_psd };

  CorrelationError(Violation violation, const std::string& message)
      : Error(ErrorKind::invalid_correlation, message), violation_(violation) {}

  Violation violation() const noexcept { return violation_; }

 private:
  Violation violation_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset, std::vector<std::string> expected)
      : Error(ErrorKind::syntax, message), offset_(offset), expected_(std::move(expected)) {}

  /// Byte offset into the source text where parsing stopped.
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& message)
      : Error(ErrorKind::evaluation, message) {}
};

class NonFiniteDrawError : public Error {
 public:
  NonFiniteDrawError(const std::string& message, std::size_t index, std::vector<double> inputs)
      : Error(ErrorKind::non_finite_draw, message), index_(index), inputs_(std::move(inputs)) {}

  std::size_t index() const noexcept { return index_; }
  const std::vector<double>& inputs() const noexcept { return inputs_; }

 private:
  std::size_t index_;
  std::vector<double> inputs_;
};

class UninformativeTestError : public Error {
 public:
  UninformativeTestError(const std::string& message, std::size_t count)
      : Error(ErrorKind::uninformative_test, message), count_(count) {}

  /// Number of draws with sensitivity + specificity <= 1 (0 when raised for a scalar call).
  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

}  // namespace bootcopula
