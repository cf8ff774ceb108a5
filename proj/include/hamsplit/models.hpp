#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hamsplit/index_core.hpp"
#include "hamsplit/ode.hpp"
#include "hamsplit/spectral.hpp"

namespace hamsplit {

/// One term c u^p v^q of a polynomial nonlinearity g(u, v), v standing for
/// the conjugate field.
struct PolyTerm {
  int p = 0;
  int q = 0;
  cplx c = 0.0;
};

/// g(u, v) = sum c_pq u^p v^q with c_qp = conj(c_pq), so g is real on v = conj(u).
/// P(z) = integral of g(u_K, v_K) over the torus, evaluated by the
/// trapezoidal rule on the collocation grid.
class NlsNonlinearity {
 public:
  NlsNonlinearity() = default;
  explicit NlsNonlinearity(std::vector<PolyTerm> terms);

  /// g = lambda/2 (u v)^2, i.e. G(s) = lambda s^2 / 2 and the cubic NLS
  /// term lambda |u|^2 u.
  static NlsNonlinearity cubic_gauge(double lambda);
  /// g = G(u v) with G(s) = sum_k coeffs[k] s^k (k >= 2).
  static NlsNonlinearity power_gauge(const std::vector<double>& coeffs);

  const std::vector<PolyTerm>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Every term has p == q, so g depends on |u|^2 only.
  bool is_gauge() const noexcept;
  int max_degree() const noexcept;

  cplx value(cplx u, cplx v) const;
  /// partial derivative in the first slot
  cplx d1(cplx u, cplx v) const;
  /// partial derivative in the second slot
  cplx d2(cplx u, cplx v) const;
  /// G'(s) for gauge nonlinearities.
  cplx gauge_derivative(cplx s) const;

  NlsNonlinearity scaled(double factor) const;

 private:
  std::vector<PolyTerm> terms_;
};

/// g(u) = sum_k coeffs[k] u^k with primitive G; P = integral of G(u).
class WaveNonlinearity {
 public:
  WaveNonlinearity() = default;
  explicit WaveNonlinearity(std::vector<double> coeffs);
  static WaveNonlinearity cubic(double lambda);

  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept;
  cplx force(cplx u) const;
  cplx primitive(cplx u) const;

 private:
  std::vector<double> coeffs_;
};

/// Fourier multiplier V_hat_a of the convolution potential.
struct Potential {
  enum class Kind { zero, rational, coefficients };
  Kind kind = Kind::zero;
  /// rational: numerator / (offset + slope |a|^2)
  double numerator = 0.0;
  double offset = 1.0;
  double slope = 0.0;
  /// coefficients: value indexed by |a|, zero past the end
  std::vector<double> values;

  static Potential none() { return {}; }
  static Potential rational(double numerator, double offset, double slope);
  static Potential table(std::vector<double> values);
  double operator()(const Point& a) const;
};

/// The split H = H0 + P on a finite mode set: frequencies omega_a of the
/// diagonal part and the exact flow of the nonlinear part.
///
/// Flows follow xi' = -i dH/d eta, eta' = i dH/d xi.
class FrequencyModel {
 public:
  virtual ~FrequencyModel() = default;

  const IndexSet& index_set() const noexcept { return *set_; }
  const std::shared_ptr<const IndexSet>& index_set_ptr() const noexcept { return set_; }
  std::span<const double> omega() const noexcept { return omega_; }
  double omega(std::size_t position) const { return omega_.at(position); }
  /// m in |omega_a| <= C |a|^m
  double growth_exponent() const noexcept { return growth_exponent_; }
  /// Smallest C with |omega_a| <= C max(1, |a|)^m over the set.
  double growth_constant() const;

  virtual std::string name() const = 0;
  virtual bool has_nonlinearity() const = 0;
  virtual std::unique_ptr<FrequencyModel> clone() const = 0;

  /// e^{-i omega_a h}, the xi multipliers of the linear flow.
  CVector linear_phases(double h) const;
  void linear_flow(State& z, double h) const;
  void linear_flow(State& z, std::span<const cplx> phases) const;

  /// Exact time-h flow of P (of P(Phi z) when a filter is set).
  virtual void nonlinear_flow(State& z, double h) const = 0;
  /// P(z), or P(Phi z) when filtered.
  virtual cplx nonlinear_energy(const State& z) const = 0;
  /// (dP/dxi, dP/deta) of the (possibly filtered) nonlinear part.
  virtual void nonlinear_gradient(const State& z, CVector& d_xi, CVector& d_eta) const = 0;

  /// Hamiltonian vector field of P at z.
  State nonlinear_vector_field(const State& z) const;

  /// Per-mode filter values Phi(h omega_a); empty when unfiltered.
  std::span<const double> filter() const noexcept { return filter_; }
  bool filtered() const noexcept { return !filter_.empty(); }
  void set_filter(std::vector<double> values);

  /// Tolerances for substeps that need numerical integration.
  const OdeTolerance& substep_tolerance() const noexcept { return ode_tol_; }
  void set_substep_tolerance(const OdeTolerance& tol) { ode_tol_ = tol; }

 protected:
  FrequencyModel(std::shared_ptr<const IndexSet> set, std::vector<double> omega, double growth_exponent);
  State filtered_copy(const State& z) const;
  /// Integrates the coefficient-space vector field of P for time h.
  void integrate_nonlinear_ode(State& z, double h) const;

 private:
  std::shared_ptr<const IndexSet> set_;
  std::vector<double> omega_;
  double growth_exponent_;
  std::vector<double> filter_;
  OdeTolerance ode_tol_{1e-14, 1e-12, 1000000};
};

/// Cubic-type NLS on the 1D torus, collocation on the shifted box [-K..K-1]
/// with omega_a = a^2 + V_hat_a.
class NlsModel final : public FrequencyModel {
 public:
  NlsModel(int K, Potential potential, NlsNonlinearity nonlinearity);

  std::string name() const override { return "nls"; }
  bool has_nonlinearity() const override { return !nonlinearity_.is_zero(); }
  std::unique_ptr<FrequencyModel> clone() const override;

  const Potential& potential() const noexcept { return potential_; }
  const NlsNonlinearity& nonlinearity() const noexcept { return nonlinearity_; }
  const CollocationGrid& grid() const noexcept { return *grid_; }

  void nonlinear_flow(State& z, double h) const override;
  cplx nonlinear_energy(const State& z) const override;
  void nonlinear_gradient(const State& z, CVector& d_xi, CVector& d_eta) const override;

 private:
  Potential potential_;
  NlsNonlinearity nonlinearity_;
  std::shared_ptr<const CollocationGrid> grid_;
};

/// Nonlinear wave equation u_tt = u_xx - m u - g(u) on the circle, in the
/// even (cosine) sector, modes a = 0..K and omega_a = sqrt(a^2 + m).
///
/// u = sum_a u_a phi_a with an orthonormal cosine basis sampled on the 2K
/// point grid, q_a = omega_a^{1/2} u_a, p_a = omega_a^{-1/2} v_a and
/// xi = (q + i p)/sqrt2, eta = (q - i p)/sqrt2. With omega_0 = 0 (m = 0) the
/// a = 0 change of variables is the identity.
class WaveModel final : public FrequencyModel {
 public:
  WaveModel(int K, double m, WaveNonlinearity nonlinearity);

  std::string name() const override { return "wave"; }
  bool has_nonlinearity() const override { return !nonlinearity_.is_zero(); }
  std::unique_ptr<FrequencyModel> clone() const override;

  double mass() const noexcept { return m_; }
  const WaveNonlinearity& nonlinearity() const noexcept { return nonlinearity_; }

  /// phi_a(x_b) for a = 0..K, b = 0..2K-1.
  double basis(std::size_t a, std::size_t b) const { return basis_[a * points_ + b]; }
  std::size_t points() const noexcept { return points_; }

  State to_complex(std::span<const cplx> u, std::span<const cplx> v) const;
  void from_complex(const State& z, CVector& u, CVector& v) const;
  /// Basis coefficients of grid samples f(x_b).
  CVector project(std::span<const cplx> samples) const;

  void nonlinear_flow(State& z, double h) const override;
  cplx nonlinear_energy(const State& z) const override;
  void nonlinear_gradient(const State& z, CVector& d_xi, CVector& d_eta) const override;

 private:
  /// dP/dq_a of the filtered nonlinearity.
  CVector force(const State& z) const;
  double scale(std::size_t a) const;  // omega_a^{-1/2}, 1 when omega_a = 0

  double m_;
  WaveNonlinearity nonlinearity_;
  std::size_t points_;
  std::vector<double> basis_;
};

std::unique_ptr<NlsModel> nls_model(int K, const Potential& potential, const NlsNonlinearity& nonlinearity);
std::unique_ptr<WaveModel> wave_model(int K, double m, const WaveNonlinearity& nonlinearity);

/// Copy of the model whose nonlinear part is P(Phi(h Omega) z).
std::unique_ptr<FrequencyModel> apply_mollifier(const FrequencyModel& model, double h,
                                                const std::function<double(double)>& Phi);

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

/// Pointwise gauge flow u <- e^{-i h G'(uv)} u, v <- e^{i h G'(uv)} v.
/// Throws Unsupported for non-gauge nonlinearities.
void gauge_flow_pointwise(std::span<cplx> u, std::span<cplx> v, double h, const NlsNonlinearity& g);
/// Pointwise ODE u' = -i d2 g(u, v), v' = i d1 g(u, v) integrated to tol.
void general_flow_pointwise(std::span<cplx> u, std::span<cplx> v, double h, const NlsNonlinearity& g,
                            const OdeTolerance& tol);

/// Gauge substep on a real field (v = conj(u)).
PhysicalField nls_nonlinear_flow(const PhysicalField& u, double h, const NlsNonlinearity& g);
/// Substep on a real field by numerical integration at each grid point.
PhysicalField general_nonlinear_substep(const PhysicalField& u, double h, const NlsNonlinearity& g,
                                        double tol);

}  // namespace hamsplit
