#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamsplit/models.hpp"
#include "hamsplit/ode.hpp"
#include "hamsplit/polynomial.hpp"

namespace hamsplit {

/// Taylor coefficients of P for a polynomial NLS nonlinearity on a tiny
/// shifted box (K <= 4, r <= 6), from the aliased convolution structure of
/// the collocated integral. Terms above degree r are dropped.
Polynomial taylor_P(const FrequencyModel& model, int r);

/// Q o phi_H0^h: the coefficient of z_j picks up e^{-i h Omega(j)}.
Polynomial compose_linear_flow(const Polynomial& Q, std::span<const double> omega, double h);

/// C with phi_C = phi_B o phi_A (time-one flows), valid through degree 6 for
/// A, B starting at degree 3; terms above cap are dropped.
Polynomial bch(const Polynomial& A, const Polynomial& B, int cap);

struct ResonanceLogEntry {
  int degree = 0;
  MultiIndex j;
  double omega = 0.0;
  double divisor = 0.0;
};

struct HomologicalSolution {
  Polynomial chi;
  Polynomial Z;
  std::vector<ResonanceLogEntry> log;  ///< the smallest divisors used
};

/// Solves chi o phi_H0^h - chi + h Z = h rhs for homogeneous rhs of the given
/// degree: Z takes the action-class part, chi_j = h rhs_j / (e^{-i h Omega(j)} - 1)
/// elsewhere. Throws ResonanceError if a needed divisor is below divisor_floor.
HomologicalSolution solve_homological(int degree, const Polynomial& rhs, double h, std::span<const double> omega,
                                      double divisor_floor, const IndexSet* set = nullptr);

struct NormalFormResult {
  Polynomial P;
  Polynomial chi;
  Polynomial Z;
  std::vector<ResonanceLogEntry> log;
  double h = 0.0;
  int K = 0;
  int r = 0;
  double divisor_floor = 0.0;
};

/// Degree-by-degree normal form of the Lie splitting map phi_H0^h o phi_hP:
/// finds chi, Z (degrees 3..r) with
/// phi_chi^{-1} o phi_H0^h o phi_hP o phi_chi = phi_H0^h o phi_hZ + O(|z|^{r+1}).
/// divisor_floor < 0 selects 1e-8 h.
NormalFormResult normalize(const FrequencyModel& model, int r, double h, double divisor_floor = -1.0);

/// Time-t flow of the polynomial Hamiltonian chi.
State polynomial_flow(const Polynomial& chi, const State& z, double t, const OdeTolerance& tol = {1e-15, 1e-13});

struct OrderVerification {
  std::vector<double> eps;
  std::vector<double> drift;  ///< max over probes of max_a |I_a(out) - I_a(in)|
  double slope = 0.0;
  double inversion_residual = 0.0;
};

/// Action drift of one splitting step at ||z|| = eps (conjugated by
/// phi_chi when nf is given) and its log-log slope in eps. Probes are random
/// real unit directions shared by every eps.
OrderVerification verify_order(const FrequencyModel& model, const NormalFormResult* nf, double h,
                               const std::vector<double>& eps_list, std::size_t n_probe, std::uint64_t seed = 7);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

nlohmann::json to_json(const Polynomial& P, const IndexSet& set);
nlohmann::json to_json(const NormalFormResult& nf, const IndexSet& set);

}  // namespace hamsplit
