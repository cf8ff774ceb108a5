#include "hamsplit/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "hamsplit/errors.hpp"

namespace hamsplit {

// ---------------------------------------------------------------- State

State::State(std::shared_ptr<const IndexSet> set)
    : set_(std::move(set)), xi_(set_->size()), eta_(set_->size()) {}

State::State(std::shared_ptr<const IndexSet> set, CVector xi, CVector eta)
    : set_(std::move(set)), xi_(std::move(xi)), eta_(std::move(eta)) {
  if (xi_.size() != set_->size() || eta_.size() != set_->size())
    throw std::invalid_argument("State: coefficient vectors must match the index set size");
}

State State::real(std::shared_ptr<const IndexSet> set, CVector xi) {
  CVector eta(xi.size());
  std::transform(xi.begin(), xi.end(), eta.begin(), [](cplx c) { return std::conj(c); });
  return State(std::move(set), std::move(xi), std::move(eta));
}

double State::norm_squared() const {
  double s = 0.0;
  for (std::size_t a = 0; a < xi_.size(); ++a) s += std::norm(xi_[a]) + std::norm(eta_[a]);
  return s;
}

double State::norm() const { return std::sqrt(norm_squared()); }

std::vector<double> State::actions() const {
  std::vector<double> out(xi_.size());
  for (std::size_t a = 0; a < xi_.size(); ++a) out[a] = std::real(xi_[a] * eta_[a]);
  return out;
}

bool State::all_finite() const {
  auto finite = [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
  return std::all_of(xi_.begin(), xi_.end(), finite) && std::all_of(eta_.begin(), eta_.end(), finite);
}

State& State::operator+=(const State& other) {
  for (std::size_t a = 0; a < xi_.size(); ++a) {
    xi_[a] += other.xi_[a];
    eta_[a] += other.eta_[a];
  }
  return *this;
}

State& State::operator-=(const State& other) {
  for (std::size_t a = 0; a < xi_.size(); ++a) {
    xi_[a] -= other.xi_[a];
    eta_[a] -= other.eta_[a];
  }
  return *this;
}

State& State::operator*=(cplx s) {
  for (auto& c : xi_) c *= s;
  for (auto& c : eta_) c *= s;
  return *this;
}

double reality_defect(const State& z) {
  double m = 0.0;
  auto xi = z.xi();
  auto eta = z.eta();
  for (std::size_t a = 0; a < xi.size(); ++a) m = std::max(m, std::abs(eta[a] - std::conj(xi[a])));
  return m;
}

bool is_real_state(const State& z, double tol) { return reality_defect(z) <= tol; }

// ---------------------------------------------------------------- Fft

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(const cplx* p) {
  // FFTW takes non-const pointers; out-of-place complex plans preserve input.
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("Fft: size must be positive");
  CVector a(n), b(n);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int len = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

Fft::Fft(Fft&& other) noexcept
    : n_(other.n_), forward_plan_(other.forward_plan_), backward_plan_(other.backward_plan_) {
  other.forward_plan_ = nullptr;
  other.backward_plan_ = nullptr;
}

Fft& Fft::operator=(Fft&& other) noexcept {
  std::swap(n_, other.n_);
  std::swap(forward_plan_, other.forward_plan_);
  std::swap(backward_plan_, other.backward_plan_);
  return *this;
}

void Fft::forward(std::span<const cplx> in, std::span<cplx> out) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in.data()), as_fftw(out.data()));
}

void Fft::backward(std::span<const cplx> in, std::span<cplx> out) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(in.data()), as_fftw(out.data()));
}

// ---------------------------------------------------------------- grid

double PhysicalField::spacing() const { return std::numbers::pi / K; }
double PhysicalField::point(std::size_t b) const { return std::numbers::pi * static_cast<double>(b) / K; }

CollocationGrid::CollocationGrid(const IndexSet& set)
    : K_(set.cutoff()), n_(2 * static_cast<std::size_t>(set.cutoff())), fft_(n_) {
  if (!set.fft_compatible())
    throw UnsupportedSet("collocation transforms need a 1D shifted box, got " + to_string(set.kind()) +
                         " in d=" + std::to_string(set.dim()));
}

double CollocationGrid::spacing() const { return std::numbers::pi / K_; }

// Mode position p holds a = p - K; the FFT slot of a is a mod 2K, which is
// p + K for p < K and p - K otherwise, i.e. a half-length rotation.
namespace {
void positions_to_fft(std::span<const cplx> by_position, std::span<cplx> by_slot, std::size_t K) {
  std::copy(by_position.begin(), by_position.begin() + static_cast<std::ptrdiff_t>(K),
            by_slot.begin() + static_cast<std::ptrdiff_t>(K));
  std::copy(by_position.begin() + static_cast<std::ptrdiff_t>(K), by_position.end(), by_slot.begin());
}

void fft_to_positions(std::span<const cplx> by_slot, std::span<cplx> by_position, std::size_t K) {
  std::copy(by_slot.begin() + static_cast<std::ptrdiff_t>(K), by_slot.end(), by_position.begin());
  std::copy(by_slot.begin(), by_slot.begin() + static_cast<std::ptrdiff_t>(K),
            by_position.begin() + static_cast<std::ptrdiff_t>(K));
}

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
}  // namespace

void CollocationGrid::to_physical(std::span<const cplx> xi, std::span<cplx> u) const {
  CVector slots(n_);
  positions_to_fft(xi, slots, static_cast<std::size_t>(K_));
  fft_.backward(slots, u);
  for (auto& c : u) c *= kInvSqrt2Pi;
}

void CollocationGrid::from_physical(std::span<const cplx> u, std::span<cplx> xi) const {
  CVector slots(n_);
  fft_.forward(u, slots);
  const double scale = 1.0 / (kInvSqrt2Pi * static_cast<double>(n_));
  for (auto& c : slots) c *= scale;
  fft_to_positions(slots, xi, static_cast<std::size_t>(K_));
}

void CollocationGrid::to_physical_conj(std::span<const cplx> eta, std::span<cplx> v) const {
  CVector slots(n_);
  positions_to_fft(eta, slots, static_cast<std::size_t>(K_));
  fft_.forward(slots, v);
  for (auto& c : v) c *= kInvSqrt2Pi;
}

void CollocationGrid::from_physical_conj(std::span<const cplx> v, std::span<cplx> eta) const {
  CVector slots(n_);
  fft_.backward(v, slots);
  const double scale = 1.0 / (kInvSqrt2Pi * static_cast<double>(n_));
  for (auto& c : slots) c *= scale;
  fft_to_positions(slots, eta, static_cast<std::size_t>(K_));
}

PhysicalField to_physical(std::span<const cplx> xi, const IndexSet& set) {
  CollocationGrid grid(set);
  if (xi.size() != set.size()) throw std::invalid_argument("to_physical: size mismatch");
  PhysicalField u{CVector(grid.points()), set.cutoff()};
  grid.to_physical(xi, u.samples);
  return u;
}

CVector from_physical(const PhysicalField& u, const IndexSet& set) {
  CollocationGrid grid(set);
  if (u.samples.size() != grid.points()) throw std::invalid_argument("from_physical: size mismatch");
  CVector xi(set.size());
  grid.from_physical(u.samples, xi);
  return xi;
}

CVector alias_project(const std::map<Point, cplx>& full_coeffs, const IndexSet& set) {
  if (set.kind() != IndexSetKind::shifted_box)
    throw UnsupportedSet("alias_project needs a shifted box");
  const int K = set.cutoff();
  const int period = 2 * K;
  CVector out(set.size());
  for (const auto& [a, c] : full_coeffs) {
    if (static_cast<int>(a.size()) != set.dim())
      throw std::invalid_argument("alias_project: point dimension mismatch");
    Point folded(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      int r = ((a[i] + K) % period + period) % period;
      folded[i] = r - K;
    }
    out[set.position(folded)] += c;
  }
  return out;
}

}  // namespace hamsplit
