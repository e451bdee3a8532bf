#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sdanc {

/// Inputs whose shapes do not compose (matrix sizes, block lengths, tap counts).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A plant or signal model that violates a structural requirement
/// (unstable, improper, non-decaying, non-SISO where SISO is required).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Wiener-Hopf system whose matrix is singular or too ill-conditioned to solve.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Configuration file or command line value that failed validation.
/// `field()` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace sdanc
