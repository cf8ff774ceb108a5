#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "hamsplit/models.hpp"
#include "hamsplit/polynomial.hpp"
#include "hamsplit/spectral.hpp"

namespace testing_support {

using hamsplit::cplx;
using hamsplit::CVector;

inline hamsplit::Potential rational_potential() { return hamsplit::Potential::rational(2.0, 10.0, 2.0); }

/// g = u^3 + v^3 + (uv)^2, the real non-gauge tiny-model nonlinearity.
inline hamsplit::NlsNonlinearity cubic_non_gauge() {
  return hamsplit::NlsNonlinearity({{3, 0, 1.0}, {0, 3, 1.0}, {2, 2, 1.0}});
}

inline CVector random_coeffs(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CVector v(n);
  for (auto& c : v) c = {normal(rng), normal(rng)};
  return v;
}

/// Random real state with ||z|| = norm.
inline hamsplit::State random_real_state(const std::shared_ptr<const hamsplit::IndexSet>& set, double norm,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto z = hamsplit::State::real(set, random_coeffs(set->size(), rng));
  z *= norm / z.norm();
  return z;
}

/// Random complex (non-real) state with ||z|| = norm.
inline hamsplit::State random_state(const std::shared_ptr<const hamsplit::IndexSet>& set, double norm,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  hamsplit::State z(set, random_coeffs(set->size(), rng), random_coeffs(set->size(), rng));
  z *= norm / z.norm();
  return z;
}

inline double max_diff(const hamsplit::State& a, const hamsplit::State& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    m = std::max(m, std::abs(a.xi()[k] - b.xi()[k]));
    m = std::max(m, std::abs(a.eta()[k] - b.eta()[k]));
  }
  return m;
}

/// Random homogeneous polynomial of the given degree with coefficients on
/// `terms` random multi-indices over `modes` modes.
inline hamsplit::Polynomial random_polynomial(std::size_t modes, int degree, int terms, std::mt19937_64& rng,
                                              int cap = 6) {
  std::uniform_int_distribution<std::size_t> pick_mode(0, modes - 1);
  std::uniform_int_distribution<int> pick_sign(0, 1);
  std::normal_distribution<double> normal;
  hamsplit::Polynomial p(cap);
  for (int t = 0; t < terms; ++t) {
    std::vector<hamsplit::SignedIndex> e;
    for (int i = 0; i < degree; ++i) e.push_back({pick_mode(rng), pick_sign(rng) ? 1 : -1});
    p.add(hamsplit::MultiIndex(std::move(e)), cplx(normal(rng), normal(rng)));
  }
  return p;
}

/// Symmetrizes so that the coefficient of conj(j) is conj(c_j).
inline hamsplit::Polynomial realify(const hamsplit::Polynomial& p) {
  hamsplit::Polynomial out(p.max_degree());
  for (const auto& [j, c] : p.terms()) {
    out.add(j, 0.5 * c);
    out.add(j.conjugate(), 0.5 * std::conj(c));
  }
  return out;
}

inline hamsplit::Polynomial product(const hamsplit::Polynomial& a, const hamsplit::Polynomial& b, int cap) {
  hamsplit::Polynomial out(cap);
  for (const auto& [j, cj] : a.terms())
    for (const auto& [k, ck] : b.terms()) out.add(j.merged(k), cj * ck);
  return out;
}

}  // namespace testing_support
