#include <doctest.h>

#include <limits>

#include "hamsplit/errors.hpp"
#include "hamsplit/integrator.hpp"
#include "hamsplit/normalform.hpp"
#include "helpers.hpp"

using namespace hamsplit;
using testing_support::max_diff;

namespace {

std::shared_ptr<const FrequencyModel> gauge_model(int K) {
  return nls_model(K, testing_support::rational_potential(), NlsNonlinearity::cubic_gauge(1.0));
}

double one_step_drift(const SchemeSpec& s, const State& z0) {
  const State z1 = step(z0, s);
  double d = 0.0;
  for (std::size_t a = 0; a < z0.size(); ++a) d = std::max(d, std::abs(z1.action(a) - z0.action(a)));
  return d;
}

}  // namespace

TEST_CASE("P = 0 reduces every scheme to the linear flow") {
  std::shared_ptr<const FrequencyModel> m = nls_model(5, testing_support::rational_potential(), {});
  const auto z0 = testing_support::random_state(m->index_set_ptr(), 1.0, 1);
  const SchemeSpec lie(SchemeKind::lie, 0.3, m), strang(SchemeKind::strang, 0.3, m);
  const State a = lie_step(z0, lie), b = strang_step(z0, strang);
  for (std::size_t k = 0; k < z0.size(); ++k) {
    const cplx e = std::polar(1.0, -0.3 * m->omega(k));
    CHECK(std::abs(a.xi()[k] - z0.xi()[k] * e) < 1e-15);
    CHECK(std::abs(a.eta()[k] - z0.eta()[k] * std::conj(e)) < 1e-15);
  }
  CHECK(max_diff(a, b) < 1e-15);
}

TEST_CASE("h = 0 is the identity") {
  const auto m = gauge_model(4);
  const auto z0 = testing_support::random_real_state(m->index_set_ptr(), 0.5, 2);
  CHECK(lie_step(z0, SchemeSpec(SchemeKind::lie, 0.0, m)) == z0);
  CHECK(strang_step(z0, SchemeSpec(SchemeKind::strang, 0.0, m)) == z0);
}

TEST_CASE("Lie orders and Strang are adjoint-consistent") {
  const auto m = gauge_model(6);
  const auto z0 = testing_support::random_real_state(m->index_set_ptr(), 0.8, 3);
  // Strang is symmetric: the -h step undoes the h step
  const State fwd = strang_step(z0, SchemeSpec(SchemeKind::strang, 0.2, m));
  CHECK(max_diff(strang_step(fwd, SchemeSpec(SchemeKind::strang, -0.2, m)), z0) < 1e-13);
  // the two Lie orders are adjoint to each other
  const State l1 = lie_step(z0, SchemeSpec(SchemeKind::lie, 0.2, m, LieOrder::linear_after_nonlinear));
  const State back = lie_step(l1, SchemeSpec(SchemeKind::lie, -0.2, m, LieOrder::nonlinear_after_linear));
  CHECK(max_diff(back, z0) < 1e-13);
}

TEST_CASE("one-step local error: Lie vs Strang gap shrinks like h^2") {
  const auto m = gauge_model(6);
  const auto z0 = testing_support::random_real_state(m->index_set_ptr(), 0.8, 4);
  auto gap = [&](double h) {
    return max_diff(lie_step(z0, SchemeSpec(SchemeKind::lie, h, m)), strang_step(z0, SchemeSpec(SchemeKind::strang, h, m)));
  };
  const double ratio = gap(0.002) / gap(0.001);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("one-step action drift scales with the degree of P") {
  // quartic gauge P: halving ||z|| divides the drift by 16
  {
    const auto m = gauge_model(8);
    const SchemeSpec s(SchemeKind::lie, 0.1, m);
    const auto dir = testing_support::random_real_state(m->index_set_ptr(), 1.0, 5);
    State a = dir, b = dir;
    a *= 1e-2;
    b *= 5e-3;
    const double ratio = one_step_drift(s, a) / one_step_drift(s, b);
    CHECK(ratio == doctest::Approx(16.0).epsilon(0.05));
  }
  // cubic terms present: divides by 8
  {
    std::shared_ptr<const FrequencyModel> m =
        nls_model(4, testing_support::rational_potential(), testing_support::cubic_non_gauge());
    const SchemeSpec s(SchemeKind::lie, 0.1, m);
    const auto dir = testing_support::random_real_state(m->index_set_ptr(), 1.0, 6);
    State a = dir, b = dir;
    a *= 1e-2;
    b *= 5e-3;
    const double ratio = one_step_drift(s, a) / one_step_drift(s, b);
    CHECK(ratio == doctest::Approx(8.0).epsilon(0.05));
  }
}

TEST_CASE("run records and composition") {
  const auto m = gauge_model(8);
  const SchemeSpec s(SchemeKind::lie, 0.1, m);
  const auto z0 = testing_support::random_real_state(m->index_set_ptr(), 0.5, 7);

  const auto r0 = run(z0, s, 0);
  REQUIRE(r0.records.size() == 1);
  CHECK(r0.records[0].n == 0);
  CHECK(r0.final_state == z0);
  CHECK(r0.records[0].max_action_drift == 0.0);

  const auto r1 = run(z0, s, 1);
  CHECK(r1.records.size() == 2);

  RunOptions every3;
  every3.record_every = 3;
  const auto r10 = run(z0, s, 10, every3);
  std::vector<std::size_t> ns;
  for (const auto& rec : r10.records) ns.push_back(rec.n);
  CHECK(ns == std::vector<std::size_t>{0, 3, 6, 9, 10});
  CHECK(r10.records.back().t == doctest::Approx(1.0));

  const auto first = run(z0, s, 4);
  const auto second = run(first.final_state, s, 6);
  CHECK(second.final_state == r10.final_state);
  CHECK(r10.input_real);
  CHECK(r10.max_reality_defect < 1e-14);

  for (std::size_t k = 1; k < r10.records.size(); ++k)
    CHECK(r10.records[k].running_max_drift >= r10.records[k - 1].running_max_drift);

  CHECK_THROWS_AS(run(z0, SchemeSpec(SchemeKind::lie, 0.0, m), 1), std::invalid_argument);
  RunOptions bad;
  bad.record_every = 0;
  CHECK_THROWS_AS(run(z0, s, 1, bad), std::invalid_argument);
}

TEST_CASE("blow-up and reality failures are reported with the step") {
  const auto m = gauge_model(4);
  const SchemeSpec s(SchemeKind::lie, 0.1, m);
  State z0 = testing_support::random_real_state(m->index_set_ptr(), 0.5, 8);

  RunOptions tight;
  tight.blowup_factor = 0.5;
  try {
    run(z0, s, 5, tight);
    FAIL("expected BlowUpError");
  } catch (const BlowUpError& e) {
    CHECK(e.step() == 1);
  }

  State nan = z0;
  nan.xi()[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(run(nan, s, 3), BlowUpError);

  RunOptions strict;
  strict.reality_tol = -1.0;
  strict.hard_fail_reality = true;
  try {
    run(z0, s, 5, strict);
    FAIL("expected RealityViolation");
  } catch (const RealityViolation& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("exact invariants of the gauge splitting") {
  const auto m = gauge_model(16);
  const auto z0 = testing_support::random_real_state(m->index_set_ptr(), 1.0, 9);
  for (auto kind : {SchemeKind::lie, SchemeKind::strang}) {
    const auto r = run(z0, SchemeSpec(kind, 0.1, m), 500, {.record_every = 50});
    for (const auto& rec : r.records) CHECK(std::abs(rec.norm - z0.norm()) < 1e-12);
    CHECK(r.max_reality_defect < 1e-12);
  }
}

TEST_CASE("largest actions and relative drift") {
  CHECK(largest_actions({1.0, 5.0, 3.0, 5.0}, 2) == std::vector<std::size_t>{1, 3});
  CHECK(largest_actions({1.0, 2.0}, 5) == std::vector<std::size_t>{1, 0});
  RunResult r;
  r.initial_actions = {1.0, 4.0, 2.0};
  r.max_abs_drift = {0.5, 0.4, 0.1};
  CHECK(max_relative_drift_top(r, 2) == doctest::Approx(0.1));
  CHECK(max_relative_drift_top(r, 3) == doctest::Approx(0.5));
}

TEST_CASE("symplecticity defect") {
  const auto m = gauge_model(4);
  const auto z = testing_support::random_real_state(m->index_set_ptr(), 0.1, 10);
  const SchemeSpec lie(SchemeKind::lie, 0.1, m), strang(SchemeKind::strang, 0.1, m);
  CHECK(symplecticity_defect([&](const State& x) { return step(x, lie); }, z, 1e-5) < 1e-8);
  CHECK(symplecticity_defect([&](const State& x) { return step(x, strang); }, z, 1e-5) < 1e-8);
  CHECK(symplecticity_defect([&](const State& x) { return fault_injected_step(x, lie); }, z, 1e-5) > 1e-3);

  std::shared_ptr<const FrequencyModel> general =
      nls_model(2, testing_support::rational_potential(), testing_support::cubic_non_gauge());
  const auto w = testing_support::random_real_state(general->index_set_ptr(), 0.3, 11);
  const SchemeSpec gl(SchemeKind::lie, 0.2, general);
  CHECK(symplecticity_defect([&](const State& x) { return step(x, gl); }, w, 1e-5) < 1e-6);
}

TEST_CASE("eps-scaling of the long-run drift on a small model") {
  const auto m = gauge_model(16);
  const SchemeSpec s(SchemeKind::lie, 0.174, m);
  const auto dir = testing_support::random_real_state(m->index_set_ptr(), 1.0, 12);
  std::vector<double> eps{0.1, 0.05, 0.025}, drift;
  for (double e : eps) {
    State z0 = dir;
    z0 *= e;
    const auto r = run(z0, s, 200, {.record_every = 200});
    drift.push_back(r.records.back().running_max_drift);
  }
  CHECK(loglog_slope(eps, drift) >= 2.0);
}
