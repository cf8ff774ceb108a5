#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hamsplit {

// Invalid arguments are reported with std::invalid_argument; the types below
// cover the domain-specific failure modes.

/// The index set cannot be used by a transform (e.g. not a 1D shifted box).
class UnsupportedSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested feature is not available for this model or nonlinearity.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The inner ODE integration of a nonlinear substep did not converge.
class SubstepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values or norm growth beyond the blow-up threshold.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(std::size_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A real trajectory lost the reality property beyond tolerance.
class RealityViolation : public std::runtime_error {
 public:
  RealityViolation(std::size_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Class enumeration would exceed its budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::size_t scanned, const std::string& what)
      : std::runtime_error(what), scanned_(scanned) {}
  /// Number of classes visited before giving up.
  std::size_t scanned() const noexcept { return scanned_; }

 private:
  std::size_t scanned_;
};

/// Two frequencies coincide where a difference is divided by.
class DivisionDegenerate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A small divisor fell below the floor while solving a homological equation.
class ResonanceError : public std::runtime_error {
 public:
  ResonanceError(int degree, std::string multi_index, double divisor,
                 const std::string& what)
      : std::runtime_error(what),
        degree_(degree),
        multi_index_(std::move(multi_index)),
        divisor_(divisor) {}
  int degree() const noexcept { return degree_; }
  const std::string& multi_index() const noexcept { return multi_index_; }
  double divisor() const noexcept { return divisor_; }

 private:
  int degree_;
  std::string multi_index_;
  double divisor_;
};

class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hamsplit
