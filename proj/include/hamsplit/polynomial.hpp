#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>

#include "hamsplit/index_core.hpp"
#include "hamsplit/spectral.hpp"

namespace hamsplit {

/// Truncated polynomial sum_j c_j z_j in the variables z = (xi, eta), with
/// monomials keyed by canonical multi-indices. Terms above max_degree are
/// dropped on insertion.
class Polynomial {
 public:
  using Map = std::map<MultiIndex, cplx>;

  explicit Polynomial(int max_degree = 6);

  int max_degree() const noexcept { return max_degree_; }
  const Map& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  cplx coefficient(const MultiIndex& j) const;
  /// Adds c to the coefficient of z_j (no-op above max_degree).
  void add(const MultiIndex& j, cplx c);

  Polynomial homogeneous_part(int degree) const;
  /// Terms of degree <= degree, with the cap lowered to match.
  Polynomial truncated(int degree) const;
  Polynomial with_max_degree(int max_degree) const;

  /// max |c_j|
  double sup_norm() const;
  /// Drops coefficients with |c| <= tol.
  void prune(double tol = 0.0);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(cplx s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }

  /// I_a = xi_a eta_a
  static Polynomial action(std::size_t mode, int max_degree = 6);
  /// H0 = sum_a omega_a xi_a eta_a
  static Polynomial quadratic(std::span<const double> omega, int max_degree = 6);

 private:
  int max_degree_;
  Map terms_;
};

/// {F, G} = i sum_a (dF/deta_a dG/dxi_a - dF/dxi_a dG/deta_a), truncated at
/// cap (default: the smaller of the two caps).
Polynomial poisson_bracket(const Polynomial& F, const Polynomial& G, int cap);
Polynomial poisson_bracket(const Polynomial& F, const Polynomial& G);

cplx evaluate(const Polynomial& P, const State& z);
void gradient(const Polynomial& P, const State& z, CVector& d_xi, CVector& d_eta);
/// (xi', eta') = (-i dP/deta, i dP/dxi)
State hamiltonian_vector_field(const Polynomial& P, const State& z);

/// Support contained in action classes.
bool is_normal_form(const Polynomial& P);
/// max_j |c_{conj j} - conj(c_j)|, zero for real-valued polynomials.
double reality_defect(const Polynomial& P);

}  // namespace hamsplit
