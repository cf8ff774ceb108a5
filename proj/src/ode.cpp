#include "hamsplit/ode.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <string>

#include "hamsplit/errors.hpp"

namespace hamsplit {

namespace odeint = boost::numeric::odeint;

namespace {
using Real = std::vector<double>;

struct StepLimit {
  std::size_t max_steps;
  std::size_t taken = 0;
  void operator()(const Real&, double) {
    if (++taken > max_steps) throw SubstepFailure("ODE integration exceeded its step budget");
  }
};
}  // namespace

void integrate_complex_ode(const ComplexOdeRhs& rhs, std::vector<std::complex<double>>& y, double t0,
                           double t1, const OdeTolerance& tol) {
  if (t0 == t1 || y.empty()) return;
  const std::size_t n = y.size();

  // odeint's error norm wants a real state, so (re, im) are interleaved.
  Real x(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    x[2 * k] = y[k].real();
    x[2 * k + 1] = y[k].imag();
  }

  std::vector<std::complex<double>> yc(n), dyc(n);
  auto system = [&](const Real& s, Real& ds, double t) {
    for (std::size_t k = 0; k < n; ++k) yc[k] = {s[2 * k], s[2 * k + 1]};
    rhs(yc, dyc, t);
    for (std::size_t k = 0; k < n; ++k) {
      ds[2 * k] = dyc[k].real();
      ds[2 * k + 1] = dyc[k].imag();
    }
  };

  auto stepper = odeint::make_controlled(tol.abs, tol.rel, odeint::runge_kutta_dopri5<Real>());
  const double span = t1 - t0;
  const double dt0 = span / 16.0;
  try {
    odeint::integrate_adaptive(stepper, system, x, t0, t1, dt0, StepLimit{tol.max_steps});
  } catch (const SubstepFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw SubstepFailure(std::string("ODE integration failed: ") + e.what());
  }

  for (std::size_t k = 0; k < n; ++k) {
    y[k] = {x[2 * k], x[2 * k + 1]};
    if (!std::isfinite(x[2 * k]) || !std::isfinite(x[2 * k + 1]))
      throw SubstepFailure("ODE integration produced non-finite values");
  }
}

}  // namespace hamsplit
