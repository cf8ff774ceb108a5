#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "hamsplit/models.hpp"
#include "hamsplit/spectral.hpp"

namespace hamsplit {

enum class SchemeKind { lie, strang };

/// Order of the two flows in a Lie step.
enum class LieOrder {
  linear_after_nonlinear,  ///< phi_H0 o phi_P (the default)
  nonlinear_after_linear   ///< phi_P o phi_H0
};

struct SchemeSpec {
  SchemeKind kind = SchemeKind::lie;
  double h = 0.1;
  std::shared_ptr<const FrequencyModel> model;
  LieOrder order = LieOrder::linear_after_nonlinear;

  SchemeSpec() = default;
  SchemeSpec(SchemeKind kind, double h, std::shared_ptr<const FrequencyModel> model,
             LieOrder order = LieOrder::linear_after_nonlinear);
};

SchemeKind scheme_kind_from_string(const std::string& name);
std::string to_string(SchemeKind kind);

State lie_step(const State& z, const SchemeSpec& scheme);
State strang_step(const State& z, const SchemeSpec& scheme);
/// Dispatches on scheme.kind.
State step(const State& z, const SchemeSpec& scheme);

/// A Lie step whose linear flow rotates eta with h (1 + mismatch) instead of
/// h, so the composite is no longer symplectic. Negative control only.
State fault_injected_step(const State& z, const SchemeSpec& scheme, double mismatch = 0.1);

struct DiagnosticsRecord {
  std::size_t n = 0;
  double t = 0.0;
  std::vector<double> actions;
  double norm = 0.0;
  /// max_a |I_a(z^n) - I_a(z^0)| at this record
  double max_action_drift = 0.0;
  /// running max of max_action_drift over every step so far
  double running_max_drift = 0.0;
};

struct RunOptions {
  std::size_t record_every = 1;
  /// Reality tolerance applied when z0 is real.
  double reality_tol = 1e-8;
  /// Throw RealityViolation instead of only recording the defect.
  bool hard_fail_reality = false;
  double blowup_factor = 1e6;
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  State final_state;
  std::vector<double> initial_actions;
  /// max_n |I_a(z^n) - I_a(z^0)| for every mode, over all steps.
  std::vector<double> max_abs_drift;
  double max_norm = 0.0;
  double max_reality_defect = 0.0;
  bool input_real = false;
  std::size_t steps = 0;
};

/// Iterates the scheme n_steps times from z0, recording every
/// options.record_every steps plus the last one. Throws BlowUpError on
/// non-finite values or ||z|| > blowup_factor ||z0||.
RunResult run(const State& z0, const SchemeSpec& scheme, std::size_t n_steps, const RunOptions& options = {});

/// max_a max_n |I_a(z^n) - I_a(z^0)| / I_a(z^0) over the `count` largest
/// initial actions.
double max_relative_drift_top(const RunResult& result, std::size_t count);
/// Positions of the `count` largest initial actions (ties: lower position first).
std::vector<std::size_t> largest_actions(const std::vector<double>& actions, std::size_t count);

using StepMap = std::function<State(const State&)>;

/// max |D^T J D - J| with D the central finite-difference Jacobian of step
/// at z with respect to (xi, eta), J = [[0, I], [-I, 0]].
double symplecticity_defect(const StepMap& step, const State& z, double fd_eps);

}  // namespace hamsplit
