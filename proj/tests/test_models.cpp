#include <doctest.h>

#include <numbers>
#include <random>

#include "hamsplit/errors.hpp"
#include "hamsplit/models.hpp"
#include "helpers.hpp"

using namespace hamsplit;
using testing_support::max_diff;

namespace {

// Central differences of the nonlinear energy against the model gradient.
double gradient_error(const FrequencyModel& m, const State& z, double d) {
  CVector gx, ge;
  m.nonlinear_gradient(z, gx, ge);
  double err = 0.0;
  for (std::size_t a = 0; a < z.size(); ++a) {
    State p = z, q = z;
    p.xi()[a] += d;
    q.xi()[a] -= d;
    err = std::max(err, std::abs((m.nonlinear_energy(p) - m.nonlinear_energy(q)) / (2.0 * d) - gx[a]));
    p = z;
    q = z;
    p.eta()[a] += d;
    q.eta()[a] -= d;
    err = std::max(err, std::abs((m.nonlinear_energy(p) - m.nonlinear_energy(q)) / (2.0 * d) - ge[a]));
  }
  return err;
}

}  // namespace

TEST_CASE("NLS frequencies") {
  const auto m = nls_model(4, testing_support::rational_potential(), {});
  const auto& s = m->index_set();
  CHECK(m->omega(s.position(0)) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(m->omega(s.position(1)) == doctest::Approx(7.0 / 6.0).epsilon(1e-15));
  CHECK(m->omega(s.position(-2)) == doctest::Approx(37.0 / 9.0).epsilon(1e-15));
  CHECK(m->growth_exponent() == 2.0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double a = std::max(1, std::abs(s.mode(k)[0]));
    CHECK(m->omega(k) <= m->growth_constant() * a * a + 1e-12);
  }
  const auto free = nls_model(3, Potential::none(), {});
  for (std::size_t k = 0; k < free->index_set().size(); ++k) {
    const int a = free->index_set().mode(k)[0];
    CHECK(free->omega(k) == a * a);
  }
}

TEST_CASE("nonlinearity validation and derivatives") {
  CHECK_THROWS_AS(NlsNonlinearity({{2, 1, 1.0}}), std::invalid_argument);        // no partner
  CHECK_THROWS_AS(NlsNonlinearity({{1, 1, 1.0}}), std::invalid_argument);        // quadratic
  CHECK_THROWS_AS(NlsNonlinearity({{3, 0, cplx(1, 1)}, {0, 3, cplx(1, 1)}}), std::invalid_argument);
  const auto g = testing_support::cubic_non_gauge();
  CHECK_FALSE(g.is_gauge());
  CHECK(g.max_degree() == 4);
  CHECK(NlsNonlinearity::cubic_gauge(2.0).is_gauge());
  const cplx u(0.3, -0.2), v(0.1, 0.4);
  CHECK(std::abs(g.value(u, v) - (u * u * u + v * v * v + u * u * v * v)) < 1e-15);
  CHECK(std::abs(g.d1(u, v) - (3.0 * u * u + 2.0 * u * v * v)) < 1e-15);
  CHECK(std::abs(g.d2(u, v) - (3.0 * v * v + 2.0 * u * u * v)) < 1e-15);
  // G(s) = s^2 / 2 for lambda = 1
  CHECK(std::abs(NlsNonlinearity::cubic_gauge(1.0).gauge_derivative(0.7) - 0.7) < 1e-15);
}

TEST_CASE("gauge substep closed form") {
  const auto g = NlsNonlinearity::cubic_gauge(1.0);
  CVector u{1.0}, v{1.0};
  gauge_flow_pointwise(u, v, 0.1, g);
  CHECK(std::abs(u[0] - std::polar(1.0, -0.1)) < 1e-15);
  CHECK(std::abs(v[0] - std::polar(1.0, 0.1)) < 1e-15);

  std::mt19937_64 rng(2);
  PhysicalField f{testing_support::random_coeffs(16, rng), 8};
  const auto same = nls_nonlinear_flow(f, 0.0, g);
  for (std::size_t b = 0; b < 16; ++b) CHECK(same.samples[b] == f.samples[b]);
  const auto out = nls_nonlinear_flow(f, 0.37, g);
  for (std::size_t b = 0; b < 16; ++b) CHECK(std::abs(out.samples[b]) == doctest::Approx(std::abs(f.samples[b])));
  CHECK_THROWS_AS(nls_nonlinear_flow(f, 0.1, testing_support::cubic_non_gauge()), Unsupported);
}

TEST_CASE("gauge closed form agrees with the ODE oracle") {
  std::mt19937_64 rng(4);
  PhysicalField f{testing_support::random_coeffs(8, rng), 4};
  for (const auto& g : {NlsNonlinearity::cubic_gauge(1.0), NlsNonlinearity::power_gauge({0.0, 0.0, 0.5, -0.3})}) {
    const auto exact = nls_nonlinear_flow(f, 0.2, g);
    const auto ode = general_nonlinear_substep(f, 0.2, g, 1e-13);
    for (std::size_t b = 0; b < 8; ++b) CHECK(std::abs(exact.samples[b] - ode.samples[b]) < 1e-10);
  }
}

TEST_CASE("general substep: identity for g = 0 and first-order consistency") {
  std::mt19937_64 rng(6);
  PhysicalField f{testing_support::random_coeffs(8, rng), 4};
  for (auto& c : f.samples) c *= 0.3;
  const auto none = general_nonlinear_substep(f, 0.5, NlsNonlinearity{}, 1e-12);
  for (std::size_t b = 0; b < 8; ++b) CHECK(none.samples[b] == f.samples[b]);

  const auto g = testing_support::cubic_non_gauge();
  const double h = 1e-6;
  const auto out = general_nonlinear_substep(f, h, g, 1e-14);
  for (std::size_t b = 0; b < 8; ++b) {
    const cplx u = f.samples[b];
    const cplx rate = (out.samples[b] - u) / h;
    CHECK(std::abs(rate - cplx(0.0, -1.0) * g.d2(u, std::conj(u))) < 1e-5);
  }
}

TEST_CASE("NLS nonlinear flow: gauge keeps actions, non-gauge keeps reality") {
  auto gauge = nls_model(8, testing_support::rational_potential(), NlsNonlinearity::cubic_gauge(1.0));
  const auto z0 = testing_support::random_real_state(gauge->index_set_ptr(), 0.5, 1);
  State z = z0;
  gauge->nonlinear_flow(z, 0.3);
  CHECK(z.norm() == doctest::Approx(z0.norm()).epsilon(1e-14));
  CHECK(reality_defect(z) < 1e-15);

  auto general = nls_model(4, testing_support::rational_potential(), testing_support::cubic_non_gauge());
  State w = testing_support::random_real_state(general->index_set_ptr(), 0.3, 2);
  general->nonlinear_flow(w, 0.3);
  CHECK(reality_defect(w) < 1e-12);
}

TEST_CASE("NLS gradient matches finite differences") {
  auto m = nls_model(3, testing_support::rational_potential(), testing_support::cubic_non_gauge());
  const auto z = testing_support::random_state(m->index_set_ptr(), 0.5, 3);
  CHECK(gradient_error(*m, z, 1e-5) < 1e-8);
}

TEST_CASE("linear flow is diagonal and keeps actions") {
  auto m = nls_model(6, testing_support::rational_potential(), {});
  const auto z0 = testing_support::random_state(m->index_set_ptr(), 1.0, 5);
  State z = z0;
  m->linear_flow(z, 0.7);
  for (std::size_t a = 0; a < z.size(); ++a) {
    CHECK(std::abs(z.xi()[a] - z0.xi()[a] * std::polar(1.0, -0.7 * m->omega(a))) < 1e-15);
    CHECK(std::abs(z.action(a) - z0.action(a)) < 1e-15);
  }
}

TEST_CASE("wave model frequencies and change of variables") {
  const auto w = wave_model(4, 0.5, {});
  CHECK(w->omega(0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  for (std::size_t a = 0; a < 5; ++a)
    CHECK(w->omega(a) * w->omega(a) - static_cast<double>(a * a) == doctest::Approx(0.5));
  const auto massless = wave_model(3, 0.0, {});
  CHECK(massless->omega(0) == 0.0);
  CHECK(massless->omega(3) == 3.0);
  CHECK_THROWS_AS(wave_model(3, -1.0, {}), std::invalid_argument);

  std::mt19937_64 rng(8);
  const CVector u = testing_support::random_coeffs(5, rng), v = testing_support::random_coeffs(5, rng);
  CVector u2, v2;
  w->from_complex(w->to_complex(u, v), u2, v2);
  for (std::size_t a = 0; a < 5; ++a) {
    CHECK(std::abs(u2[a] - u[a]) < 1e-13);
    CHECK(std::abs(v2[a] - v[a]) < 1e-13);
  }
  // real u, v give a real state
  CVector ur(5), vr(5);
  for (std::size_t a = 0; a < 5; ++a) {
    ur[a] = u[a].real();
    vr[a] = v[a].real();
  }
  CHECK(reality_defect(w->to_complex(ur, vr)) < 1e-15);
}

TEST_CASE("wave cosine basis is orthonormal on the grid") {
  const auto w = wave_model(6, 1.0, {});
  const double dx = std::numbers::pi / 6.0;
  for (std::size_t a = 0; a <= 6; ++a) {
    for (std::size_t c = 0; c <= 6; ++c) {
      double s = 0.0;
      for (std::size_t b = 0; b < w->points(); ++b) s += w->basis(a, b) * w->basis(c, b) * dx;
      CHECK(s == doctest::Approx(a == c ? 1.0 : 0.0).epsilon(1e-13));
    }
  }
  CVector samples(w->points());
  for (std::size_t b = 0; b < w->points(); ++b) samples[b] = 2.0 * w->basis(2, b) - w->basis(5, b);
  const CVector c = w->project(samples);
  for (std::size_t a = 0; a <= 6; ++a)
    CHECK(std::abs(c[a] - (a == 2 ? 2.0 : a == 5 ? -1.0 : 0.0)) < 1e-13);
}

TEST_CASE("wave kick is the exact flow of P and matches its gradient") {
  auto w = wave_model(5, 1.0, WaveNonlinearity::cubic(1.0));
  const auto z0 = testing_support::random_real_state(w->index_set_ptr(), 0.7, 9);
  CHECK(gradient_error(*w, z0, 1e-5) < 1e-8);

  // P depends on q alone, so u is unchanged by the kick
  State z = z0;
  w->nonlinear_flow(z, 0.25);
  CVector u0, v0, u1, v1;
  w->from_complex(z0, u0, v0);
  w->from_complex(z, u1, v1);
  for (std::size_t a = 0; a < u0.size(); ++a) CHECK(std::abs(u1[a] - u0[a]) < 1e-14);
  CHECK(reality_defect(z) < 1e-15);
  // the flow is a group in h
  State half = z0;
  w->nonlinear_flow(half, 0.125);
  w->nonlinear_flow(half, 0.125);
  CHECK(max_diff(half, z) < 1e-14);
}

TEST_CASE("mollifier") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(std::abs(sinc(std::numbers::pi)) < 1e-16);
  CHECK(sinc(1e-9) == doctest::Approx(1.0));

  auto m = nls_model(4, testing_support::rational_potential(), NlsNonlinearity::cubic_gauge(1.0));
  const auto z = testing_support::random_real_state(m->index_set_ptr(), 0.5, 10);

  // Phi = 1 is the unfiltered model, bit for bit
  const auto unit = apply_mollifier(*m, 0.3, [](double) { return 1.0; });
  CHECK_FALSE(unit->filtered());
  State a = z, b = z;
  m->nonlinear_flow(a, 0.3);
  unit->nonlinear_flow(b, 0.3);
  CHECK(a == b);

  // a step with h omega_a = pi switches mode a off
  const std::size_t p = m->index_set().position(2);
  const double h = std::numbers::pi / m->omega(p);
  const auto filt = apply_mollifier(*m, h, sinc);
  REQUIRE(filt->filtered());
  State bumped = z;
  bumped.xi()[p] += 0.3;
  bumped.eta()[p] -= 0.2;
  CHECK(std::abs(filt->nonlinear_energy(bumped) - filt->nonlinear_energy(z)) < 1e-15);
  CHECK(gradient_error(*filt, z, 1e-5) < 1e-8);

  auto wave = wave_model(4, 1.0, WaveNonlinearity::cubic(1.0));
  const auto wf = apply_mollifier(*wave, 0.4, sinc);
  CHECK(gradient_error(*wf, testing_support::random_real_state(wave->index_set_ptr(), 0.5, 11), 1e-5) < 1e-8);
}

TEST_CASE("filtered NLS flow conserves the filtered energy along the ODE") {
  auto m = nls_model(3, testing_support::rational_potential(), NlsNonlinearity::cubic_gauge(1.0));
  const auto f = apply_mollifier(*m, 0.5, sinc);
  const auto z0 = testing_support::random_real_state(m->index_set_ptr(), 0.5, 12);
  State z = z0;
  f->nonlinear_flow(z, 0.5);
  CHECK(std::abs(f->nonlinear_energy(z) - f->nonlinear_energy(z0)) < 1e-12);
  CHECK(reality_defect(z) < 1e-12);
}
