#include "hamsplit/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hamsplit/errors.hpp"
#include "hamsplit/integrator.hpp"
#include "hamsplit/resonance.hpp"

namespace hamsplit {

namespace {

// Visits nondecreasing sequences of length len over [0, n).
void for_each_sorted_tuple(std::size_t n, int len, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> t(static_cast<std::size_t>(len), 0);
  if (len == 0) {
    f(t);
    return;
  }
  while (true) {
    f(t);
    std::ptrdiff_t i = len - 1;
    while (i >= 0 && t[static_cast<std::size_t>(i)] == n - 1) --i;
    if (i < 0) return;
    const std::size_t v = t[static_cast<std::size_t>(i)] + 1;
    for (auto k = static_cast<std::size_t>(i); k < t.size(); ++k) t[k] = v;
  }
}

// len! / prod(multiplicity!) for a sorted tuple.
double arrangements(const std::vector<std::size_t>& t) {
  double r = std::tgamma(static_cast<double>(t.size()) + 1.0);
  for (std::size_t i = 0; i < t.size();) {
    std::size_t k = i;
    while (k < t.size() && t[k] == t[i]) ++k;
    r /= std::tgamma(static_cast<double>(k - i) + 1.0);
    i = k;
  }
  return r;
}

}  // namespace

Polynomial taylor_P(const FrequencyModel& model, int r) {
  const auto* nls = dynamic_cast<const NlsModel*>(&model);
  if (!nls) throw Unsupported("Taylor expansion is available for polynomial NLS models only");
  const auto& set = model.index_set();
  const int K = set.cutoff();
  if (K > 4) throw std::invalid_argument("Taylor expansion needs a tiny mode set (K <= 4)");
  if (r < 3 || r > 6) throw std::invalid_argument("Taylor expansion degree must be in 3..6");

  const std::size_t n = set.size();
  const int period = 2 * K;
  const double two_pi = 2.0 * std::numbers::pi;
  Polynomial P(r);
  for (const auto& term : nls->nonlinearity().terms()) {
    if (term.p + term.q > r) continue;
    const double prefactor = two_pi * std::pow(two_pi, -0.5 * (term.p + term.q));
    for_each_sorted_tuple(n, term.p, [&](const std::vector<std::size_t>& xs) {
      int sum_x = 0;
      for (auto k : xs) sum_x += set.mode(k)[0];
      const double ax = arrangements(xs);
      for_each_sorted_tuple(n, term.q, [&](const std::vector<std::size_t>& ys) {
        int sum_y = 0;
        for (auto k : ys) sum_y += set.mode(k)[0];
        if (((sum_x - sum_y) % period + period) % period != 0) return;
        std::vector<SignedIndex> e;
        double filt = 1.0;
        for (auto k : xs) {
          e.push_back({k, 1});
          if (model.filtered()) filt *= model.filter()[k];
        }
        for (auto k : ys) {
          e.push_back({k, -1});
          if (model.filtered()) filt *= model.filter()[k];
        }
        P.add(MultiIndex(std::move(e)), prefactor * term.c * ax * arrangements(ys) * filt);
      });
    });
  }
  return P;
}

Polynomial compose_linear_flow(const Polynomial& Q, std::span<const double> omega, double h) {
  Polynomial out(Q.max_degree());
  for (const auto& [j, c] : Q.terms()) out.add(j, c * std::polar(1.0, -h * omega_of(j, omega)));
  return out;
}

Polynomial bch(const Polynomial& A, const Polynomial& B, int cap) {
  const Polynomial a = A.truncated(cap).with_max_degree(cap);
  const Polynomial b = B.truncated(cap).with_max_degree(cap);
  const Polynomial W = poisson_bracket(b, a, cap);
  const Polynomial WA = poisson_bracket(W, a, cap);
  Polynomial C = a + b;
  C += 0.5 * W;
  C += (1.0 / 12.0) * WA;
  C -= (1.0 / 12.0) * poisson_bracket(W, b, cap);
  C -= (1.0 / 24.0) * poisson_bracket(WA, b, cap);
  return C;
}

HomologicalSolution solve_homological(int degree, const Polynomial& rhs, double h, std::span<const double> omega,
                                      double divisor_floor, const IndexSet* set) {
  HomologicalSolution sol{Polynomial(rhs.max_degree()), Polynomial(rhs.max_degree()), {}};
  for (const auto& [j, c] : rhs.terms()) {
    if (static_cast<int>(j.degree()) != degree)
      throw std::invalid_argument("homological right-hand side is not homogeneous of degree " +
                                  std::to_string(degree));
    if (is_action_class(j)) {
      sol.Z.add(j, c);
      continue;
    }
    const double w = omega_of(j, omega);
    const double div = small_divisor(h, w);
    if (div < divisor_floor) {
      const std::string name = set ? j.to_string(*set) : std::string("?");
      throw ResonanceError(degree, name, div,
                           "small divisor " + std::to_string(div) + " below floor at degree " +
                               std::to_string(degree) + " for class " + name);
    }
    sol.chi.add(j, h * c / (std::polar(1.0, -h * w) - 1.0));
    if (sol.log.empty() || div < sol.log.front().divisor) sol.log.insert(sol.log.begin(), {degree, j, w, div});
    if (sol.log.size() > 4) sol.log.pop_back();
  }
  return sol;
}

NormalFormResult normalize(const FrequencyModel& model, int r, double h, double divisor_floor) {
  if (r < 3) throw std::invalid_argument("normal form degree r must be >= 3");
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  NormalFormResult nf;
  nf.h = h;
  nf.K = model.index_set().cutoff();
  nf.r = r;
  nf.divisor_floor = divisor_floor < 0.0 ? 1e-8 * h : divisor_floor;
  nf.P = taylor_P(model, r);
  nf.chi = Polynomial(r);
  nf.Z = Polynomial(r);
  const auto omega = model.omega();
  const Polynomial hP = h * nf.P;

  // phi_H0 o phi_hP o phi_chi = phi_chi o phi_H0 o phi_hZ reads
  // bch(chi, hP) = bch(hZ, chi o phi_H0) degree by degree.
  for (int l = 3; l <= r; ++l) {
    const Polynomial lhs = bch(nf.chi, hP, l);
    const Polynomial rhs_side = bch(h * nf.Z, compose_linear_flow(nf.chi, omega, h), l);
    Polynomial rhs = (lhs - rhs_side).homogeneous_part(l);
    rhs *= 1.0 / h;
    auto sol = solve_homological(l, rhs, h, omega, nf.divisor_floor, &model.index_set());
    nf.chi += sol.chi;
    nf.Z += sol.Z;
    nf.log.insert(nf.log.end(), sol.log.begin(), sol.log.end());
  }
  return nf;
}

State polynomial_flow(const Polynomial& chi, const State& z, double t, const OdeTolerance& tol) {
  const std::size_t n = z.size();
  CVector y(2 * n);
  std::copy(z.xi().begin(), z.xi().end(), y.begin());
  std::copy(z.eta().begin(), z.eta().end(), y.begin() + static_cast<std::ptrdiff_t>(n));
  State work(z.index_set_ptr());
  auto rhs = [&](const CVector& s, CVector& ds, double) {
    std::copy(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n), work.xi().begin());
    std::copy(s.begin() + static_cast<std::ptrdiff_t>(n), s.end(), work.eta().begin());
    const State f = hamiltonian_vector_field(chi, work);
    std::copy(f.xi().begin(), f.xi().end(), ds.begin());
    std::copy(f.eta().begin(), f.eta().end(), ds.begin() + static_cast<std::ptrdiff_t>(n));
  };
  OdeTolerance scaled = tol;
  scaled.abs = std::max(tol.abs * z.norm(), 1e-300);
  try {
    integrate_complex_ode(rhs, y, 0.0, t, scaled);
  } catch (const SubstepFailure& e) {
    throw VerificationFailed(std::string("polynomial flow failed: ") + e.what());
  }
  State out(z.index_set_ptr());
  std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n), out.xi().begin());
  std::copy(y.begin() + static_cast<std::ptrdiff_t>(n), y.end(), out.eta().begin());
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

OrderVerification verify_order(const FrequencyModel& model, const NormalFormResult* nf, double h,
                               const std::vector<double>& eps_list, std::size_t n_probe, std::uint64_t seed) {
  if (eps_list.size() < 2) throw std::invalid_argument("verify_order needs at least two eps values");
  if (n_probe == 0) throw std::invalid_argument("verify_order needs at least one probe");
  const SchemeSpec scheme(SchemeKind::lie, h, std::shared_ptr<const FrequencyModel>(model.clone()));
  const auto set = model.index_set_ptr();
  const std::size_t n = set->size();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<State> dirs;
  for (std::size_t p = 0; p < n_probe; ++p) {
    CVector xi(n);
    for (auto& c : xi) c = {normal(rng), normal(rng)};
    State z = State::real(set, std::move(xi));
    z *= 1.0 / z.norm();
    dirs.push_back(std::move(z));
  }

  OrderVerification out;
  out.eps = eps_list;
  for (double eps : eps_list) {
    double worst = 0.0;
    for (const auto& d : dirs) {
      State z = d;
      z *= eps;
      State w;
      if (nf) {
        const State y = polynomial_flow(nf->chi, z, 1.0);
        const State back = polynomial_flow(nf->chi, y, -1.0);
        State diff = back;
        diff -= z;
        out.inversion_residual = std::max(out.inversion_residual, diff.norm() / z.norm());
        w = polynomial_flow(nf->chi, lie_step(y, scheme), -1.0);
      } else {
        w = lie_step(z, scheme);
      }
      for (std::size_t a = 0; a < n; ++a) worst = std::max(worst, std::abs(w.action(a) - z.action(a)));
    }
    out.drift.push_back(worst);
  }
  if (out.inversion_residual > 1e-10)
    throw VerificationFailed("conjugacy inversion residual " + std::to_string(out.inversion_residual) +
                             " exceeds 1e-10");
  out.slope = loglog_slope(out.eps, out.drift);
  return out;
}

nlohmann::json to_json(const Polynomial& P, const IndexSet& set) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [j, c] : P.terms())
    arr.push_back({{"index", j.to_string(set)}, {"re", c.real()}, {"im", c.imag()}});
  return arr;
}

nlohmann::json to_json(const NormalFormResult& nf, const IndexSet& set) {
  nlohmann::json log = nlohmann::json::array();
  for (const auto& e : nf.log)
    log.push_back({{"degree", e.degree}, {"class", e.j.to_string(set)}, {"omega", e.omega}, {"divisor", e.divisor}});
  return {{"h", nf.h},     {"K", nf.K},           {"r", nf.r},         {"divisor_floor", nf.divisor_floor},
          {"chi", to_json(nf.chi, set)}, {"Z", to_json(nf.Z, set)}, {"resonance_log", log}};
}

}  // namespace hamsplit
