#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qheat {

/// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands whose dimensions or tensor layouts do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input outside the physically meaningful domain (non-Hermitian observable,
/// r outside [0,1], bad grid, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A would-be density operator with an eigenvalue below tolerance.
class PositivityError : public InvalidInput {
 public:
  PositivityError(const std::string& what, double min_eigenvalue)
      : InvalidInput(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// The coupling connects energy shells at more than one transition frequency.
class MultiFrequencyError : public InvalidInput {
 public:
  MultiFrequencyError(const std::string& what, std::vector<double> gaps)
      : InvalidInput(what), gaps_(std::move(gaps)) {}
  /// Distinct positive transition frequencies present in the coupling.
  const std::vector<double>& gaps() const noexcept { return gaps_; }

 private:
  std::vector<double> gaps_;
};

class ZeroCouplingError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Closed-form threshold evaluated where it diverges (bath at infinite temperature).
class SingularThreshold : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// 1 + c <= 0 in the local/correlation split of the apparent temperature.
class DegenerateSplit : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class IntegrationUnstable : public Error {
 public:
  using Error::Error;
};

}  // namespace qheat
