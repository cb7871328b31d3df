#pragma once

#include <cstddef>
#include <exception>
#include <string>
#include <utility>
#include <vector>

namespace lgf {

/// Base of every error raised by the library. The message may be extended
/// with context (step index, time) as the error propagates outward.
class Error : public std::exception {
 public:
  explicit Error(std::string msg) : msg_(std::move(msg)) {}
  const char* what() const noexcept override { return msg_.c_str(); }
  void append_context(const std::string& ctx) { msg_ += " [" + ctx + "]"; }

 private:
  std::string msg_;
};

/// Invalid or non-finite argument to a pointwise function.
class DomainError : public Error {
  using Error::Error;
};

/// Physical or numerical parameters that violate a model constraint.
class ParameterError : public Error {
  using Error::Error;
};

/// Operation not defined for the grid dimension it was called on.
class DimensionError : public Error {
  using Error::Error;
};

/// Malformed snapshot or report file.
class FormatError : public Error {
  using Error::Error;
};

/// Configuration text failed validation; carries every message, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
};

/// Failures of the numerics themselves (as opposed to bad input). The CLI
/// maps these to exit code 2.
class NumericalFailure : public Error {
  using Error::Error;
};

/// b^2 + c fell below the degeneracy floor, i.e. (m, n) approached {m = k0, n = 0}.
class DegeneracyError : public NumericalFailure {
 public:
  DegeneracyError(double m, double n, double discriminant);
  double m() const { return m_; }
  double n() const { return n_; }

 private:
  double m_;
  double n_;
};

class QuadratureError : public NumericalFailure {
 public:
  QuadratureError(std::string msg, double error_estimate)
      : NumericalFailure(std::move(msg)), error_estimate_(error_estimate) {}
  double error_estimate() const { return error_estimate_; }

 private:
  double error_estimate_;
};

class PositivityLoss : public NumericalFailure {
 public:
  PositivityLoss(std::string field, std::size_t index, double value, double t);
  const std::string& field() const { return field_; }
  std::size_t index() const { return index_; }
  double value() const { return value_; }

 private:
  std::string field_;
  std::size_t index_;
  double value_;
};

class NonFinite : public NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

}  // namespace lgf
