#include "hamsplit/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hamsplit/errors.hpp"

namespace hamsplit {

SchemeSpec::SchemeSpec(SchemeKind kind_, double h_, std::shared_ptr<const FrequencyModel> model_, LieOrder order_)
    : kind(kind_), h(h_), model(std::move(model_)), order(order_) {}

SchemeKind scheme_kind_from_string(const std::string& name) {
  if (name == "lie") return SchemeKind::lie;
  if (name == "strang") return SchemeKind::strang;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string to_string(SchemeKind kind) { return kind == SchemeKind::lie ? "lie" : "strang"; }

namespace {
void check_scheme(const State& z, const SchemeSpec& s) {
  if (!s.model) throw std::invalid_argument("scheme has no model");
  if (z.size() != s.model->index_set().size())
    throw std::invalid_argument("state size does not match the model");
}
}  // namespace

State lie_step(const State& z, const SchemeSpec& scheme) {
  check_scheme(z, scheme);
  State out = z;
  if (scheme.order == LieOrder::linear_after_nonlinear) {
    scheme.model->nonlinear_flow(out, scheme.h);
    scheme.model->linear_flow(out, scheme.h);
  } else {
    scheme.model->linear_flow(out, scheme.h);
    scheme.model->nonlinear_flow(out, scheme.h);
  }
  return out;
}

State strang_step(const State& z, const SchemeSpec& scheme) {
  check_scheme(z, scheme);
  State out = z;
  scheme.model->nonlinear_flow(out, scheme.h / 2);
  scheme.model->linear_flow(out, scheme.h);
  scheme.model->nonlinear_flow(out, scheme.h / 2);
  return out;
}

State step(const State& z, const SchemeSpec& scheme) {
  return scheme.kind == SchemeKind::lie ? lie_step(z, scheme) : strang_step(z, scheme);
}

State fault_injected_step(const State& z, const SchemeSpec& scheme, double mismatch) {
  check_scheme(z, scheme);
  State out = z;
  scheme.model->nonlinear_flow(out, scheme.h);
  const auto omega = scheme.model->omega();
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.xi()[k] *= std::polar(1.0, -omega[k] * scheme.h);
    out.eta()[k] *= std::polar(1.0, omega[k] * scheme.h * (1.0 + mismatch));
  }
  return out;
}

namespace {

void fill_record(DiagnosticsRecord& r, std::size_t n, double h, const State& z, const std::vector<double>& I0,
                 double running) {
  r.n = n;
  r.t = static_cast<double>(n) * h;
  r.actions = z.actions();
  r.norm = z.norm();
  double m = 0.0;
  for (std::size_t a = 0; a < I0.size(); ++a) m = std::max(m, std::abs(r.actions[a] - I0[a]));
  r.max_action_drift = m;
  r.running_max_drift = std::max(running, m);
}

}  // namespace

RunResult run(const State& z0, const SchemeSpec& scheme, std::size_t n_steps, const RunOptions& options) {
  check_scheme(z0, scheme);
  if (options.record_every == 0) throw std::invalid_argument("record_every must be >= 1");
  if (!(scheme.h > 0.0)) throw std::invalid_argument("step size h must be positive");

  RunResult res;
  res.initial_actions = z0.actions();
  res.max_abs_drift.assign(z0.size(), 0.0);
  res.input_real = is_real_state(z0, 0.0);
  const double norm0 = z0.norm();
  res.max_norm = norm0;
  const double blowup = options.blowup_factor * norm0;

  DiagnosticsRecord rec;
  fill_record(rec, 0, scheme.h, z0, res.initial_actions, 0.0);
  res.records.push_back(rec);

  const auto& model = *scheme.model;
  const CVector phases = model.linear_phases(scheme.h);
  State z = z0;
  double running = 0.0;

  for (std::size_t n = 1; n <= n_steps; ++n) {
    if (scheme.kind == SchemeKind::lie) {
      if (scheme.order == LieOrder::linear_after_nonlinear) {
        model.nonlinear_flow(z, scheme.h);
        model.linear_flow(z, phases);
      } else {
        model.linear_flow(z, phases);
        model.nonlinear_flow(z, scheme.h);
      }
    } else {
      model.nonlinear_flow(z, scheme.h / 2);
      model.linear_flow(z, phases);
      model.nonlinear_flow(z, scheme.h / 2);
    }

    if (!z.all_finite())
      throw BlowUpError(n, "non-finite state at step " + std::to_string(n));
    const double nz = z.norm();
    res.max_norm = std::max(res.max_norm, nz);
    if (nz > blowup)
      throw BlowUpError(n, "norm " + std::to_string(nz) + " exceeds the blow-up threshold at step " +
                               std::to_string(n));

    double step_drift = 0.0;
    auto xi = z.xi();
    auto eta = z.eta();
    for (std::size_t a = 0; a < z.size(); ++a) {
      const double d = std::abs(std::real(xi[a] * eta[a]) - res.initial_actions[a]);
      res.max_abs_drift[a] = std::max(res.max_abs_drift[a], d);
      step_drift = std::max(step_drift, d);
    }
    running = std::max(running, step_drift);

    if (res.input_real) {
      const double defect = reality_defect(z);
      res.max_reality_defect = std::max(res.max_reality_defect, defect);
      if (options.hard_fail_reality && defect > options.reality_tol)
        throw RealityViolation(n, "reality defect " + std::to_string(defect) + " at step " + std::to_string(n));
    }

    if (n % options.record_every == 0 || n == n_steps) {
      fill_record(rec, n, scheme.h, z, res.initial_actions, running);
      res.records.push_back(rec);
    }
  }
  res.final_state = std::move(z);
  res.steps = n_steps;
  return res;
}

std::vector<std::size_t> largest_actions(const std::vector<double>& actions, std::size_t count) {
  std::vector<std::size_t> idx(actions.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return actions[a] > actions[b]; });
  idx.resize(std::min(count, idx.size()));
  return idx;
}

double max_relative_drift_top(const RunResult& result, std::size_t count) {
  double m = 0.0;
  for (std::size_t a : largest_actions(result.initial_actions, count)) {
    if (result.initial_actions[a] <= 0.0) continue;
    m = std::max(m, result.max_abs_drift[a] / result.initial_actions[a]);
  }
  return m;
}

double symplecticity_defect(const StepMap& step, const State& z, double fd_eps) {
  if (!(fd_eps > 0.0)) throw std::invalid_argument("fd_eps must be positive");
  const std::size_t n = z.size();
  const std::size_t dim = 2 * n;
  // D[row][col], rows = output coordinates (xi then eta), cols = inputs.
  std::vector<CVector> D(dim, CVector(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    State zp = z, zm = z;
    auto& cp = col < n ? zp.xi()[col] : zp.eta()[col - n];
    auto& cm = col < n ? zm.xi()[col] : zm.eta()[col - n];
    cp += fd_eps;
    cm -= fd_eps;
    const State fp = step(zp);
    const State fm = step(zm);
    for (std::size_t row = 0; row < dim; ++row) {
      const cplx vp = row < n ? fp.xi()[row] : fp.eta()[row - n];
      const cplx vm = row < n ? fm.xi()[row] : fm.eta()[row - n];
      D[row][col] = (vp - vm) / (2.0 * fd_eps);
    }
  }
  // (D^T J D)_{ij} = sum_k D_{k i} (J D)_{k j}, (J D)_{k j} = D_{k+n, j} for
  // k < n and -D_{k-n, j} otherwise.
  double defect = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += D[k][i] * D[k + n][j] - D[k + n][i] * D[k][j];
      double target = 0.0;
      if (i < n && j == i + n) target = 1.0;
      if (i >= n && j + n == i) target = -1.0;
      defect = std::max(defect, std::abs(s - target));
    }
  }
  return defect;
}

}  // namespace hamsplit
