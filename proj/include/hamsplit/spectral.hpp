#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "hamsplit/index_core.hpp"

namespace hamsplit {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// z = (xi, eta) over an index set N_K.
class State {
 public:
  State() = default;
  explicit State(std::shared_ptr<const IndexSet> set);
  State(std::shared_ptr<const IndexSet> set, CVector xi, CVector eta);

  /// Real state (xi, conj(xi)).
  static State real(std::shared_ptr<const IndexSet> set, CVector xi);

  const IndexSet& index_set() const { return *set_; }
  const std::shared_ptr<const IndexSet>& index_set_ptr() const noexcept { return set_; }
  std::size_t size() const noexcept { return xi_.size(); }

  std::span<cplx> xi() noexcept { return xi_; }
  std::span<cplx> eta() noexcept { return eta_; }
  std::span<const cplx> xi() const noexcept { return xi_; }
  std::span<const cplx> eta() const noexcept { return eta_; }

  /// z_j for j = (a, delta).
  cplx operator[](const SignedIndex& j) const { return j.delta > 0 ? xi_[j.mode] : eta_[j.mode]; }

  /// ||z||^2 = sum_a |xi_a|^2 + |eta_a|^2
  double norm_squared() const;
  double norm() const;

  /// I_a(z) = xi_a eta_a (complex in general, |xi_a|^2 on real states).
  cplx action(std::size_t a) const { return xi_[a] * eta_[a]; }
  /// Real parts of all actions.
  std::vector<double> actions() const;

  bool all_finite() const;

  State& operator+=(const State& other);
  State& operator-=(const State& other);
  State& operator*=(cplx s);

  friend bool operator==(const State& a, const State& b) {
    return a.xi_ == b.xi_ && a.eta_ == b.eta_;
  }

 private:
  std::shared_ptr<const IndexSet> set_;
  CVector xi_;
  CVector eta_;
};

/// max_a |eta_a - conj(xi_a)| <= tol
bool is_real_state(const State& z, double tol);
double reality_defect(const State& z);

/// Thin RAII wrapper over an FFTW complex transform of fixed length.
/// Plans are created unaligned, so execution is thread-safe on any buffers.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  std::size_t size() const noexcept { return n_; }
  /// out_k = sum_b in_b exp(-2 pi i k b / n); in and out must not alias.
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  /// out_k = sum_b in_b exp(+2 pi i k b / n); in and out must not alias.
  void backward(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  std::size_t n_ = 0;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Samples of a field at the collocation points x_b = pi b / K, b = 0..2K-1.
struct PhysicalField {
  CVector samples;
  int K = 0;

  double spacing() const;
  double point(std::size_t b) const;
};

/// Coefficient <-> grid transforms for a 1D shifted box [-K..K-1] with
/// u(x) = (2 pi)^{-1/2} sum_a xi_a e^{i a x} and
/// v(x) = (2 pi)^{-1/2} sum_a eta_a e^{-i a x}.
class CollocationGrid {
 public:
  explicit CollocationGrid(const IndexSet& set);

  int cutoff() const noexcept { return K_; }
  std::size_t points() const noexcept { return n_; }
  double spacing() const;

  void to_physical(std::span<const cplx> xi, std::span<cplx> u) const;
  void from_physical(std::span<const cplx> u, std::span<cplx> xi) const;
  void to_physical_conj(std::span<const cplx> eta, std::span<cplx> v) const;
  void from_physical_conj(std::span<const cplx> v, std::span<cplx> eta) const;

 private:
  int K_;
  std::size_t n_;
  Fft fft_;
};

/// Grid samples of (2 pi)^{-1/2} sum_a xi_a e^{i a x_b}.
PhysicalField to_physical(std::span<const cplx> xi, const IndexSet& set);
/// Inverse of to_physical.
CVector from_physical(const PhysicalField& u, const IndexSet& set);

/// The collocation operator Q: output_a = sum_b full[a + 2K b] over N_K.
/// Requires a shifted box (any d).
CVector alias_project(const std::map<Point, cplx>& full_coeffs, const IndexSet& set);

}  // namespace hamsplit
