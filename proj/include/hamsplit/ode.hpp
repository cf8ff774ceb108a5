#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace hamsplit {

/// dy/dt = f(y, t) on a complex state vector.
using ComplexOdeRhs =
    std::function<void(const std::vector<std::complex<double>>& y, std::vector<std::complex<double>>& dydt, double t)>;

struct OdeTolerance {
  double abs = 1e-13;
  double rel = 1e-12;
  std::size_t max_steps = 1000000;
};

/// Integrates y from t0 to t1 (either direction) with an adaptive
/// Dormand-Prince 5(4) pair. Throws SubstepFailure when the stepper gives up,
/// runs out of steps or produces non-finite values.
void integrate_complex_ode(const ComplexOdeRhs& rhs, std::vector<std::complex<double>>& y, double t0,
                           double t1, const OdeTolerance& tol = {});

}  // namespace hamsplit
