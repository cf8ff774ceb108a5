#include "hamsplit/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "hamsplit/errors.hpp"

namespace hamsplit {

namespace {

cplx ipow(cplx x, int n) {
  cplx r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

const double kSqrt2 = std::numbers::sqrt2;
const cplx kI{0.0, 1.0};

}  // namespace

// ---------------------------------------------------------------- nonlinearities

NlsNonlinearity::NlsNonlinearity(std::vector<PolyTerm> terms) {
  std::map<std::pair<int, int>, cplx> merged;
  for (const auto& t : terms) {
    if (t.p < 0 || t.q < 0) throw std::invalid_argument("nonlinearity exponents must be nonnegative");
    if (t.p + t.q < 3) throw std::invalid_argument("nonlinearity terms must be at least cubic");
    merged[{t.p, t.q}] += t.c;
  }
  for (const auto& [pq, c] : merged) {
    if (c == 0.0) continue;
    auto it = merged.find({pq.second, pq.first});
    const cplx partner = it == merged.end() ? cplx(0.0) : it->second;
    if (std::abs(partner - std::conj(c)) > 1e-14 * std::max(1.0, std::abs(c)))
      throw std::invalid_argument("nonlinearity is not real: coefficient of u^" + std::to_string(pq.first) +
                                  " v^" + std::to_string(pq.second) + " lacks its conjugate partner");
    terms_.push_back({pq.first, pq.second, c});
  }
}

NlsNonlinearity NlsNonlinearity::cubic_gauge(double lambda) {
  if (lambda == 0.0) return {};
  return NlsNonlinearity({{2, 2, lambda / 2.0}});
}

NlsNonlinearity NlsNonlinearity::power_gauge(const std::vector<double>& coeffs) {
  std::vector<PolyTerm> terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    if (k < 2) throw std::invalid_argument("G(s) must start at s^2");
    terms.push_back({static_cast<int>(k), static_cast<int>(k), coeffs[k]});
  }
  return NlsNonlinearity(std::move(terms));
}

bool NlsNonlinearity::is_gauge() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const PolyTerm& t) { return t.p == t.q; });
}

int NlsNonlinearity::max_degree() const noexcept {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, t.p + t.q);
  return m;
}

cplx NlsNonlinearity::value(cplx u, cplx v) const {
  cplx s = 0.0;
  for (const auto& t : terms_) s += t.c * ipow(u, t.p) * ipow(v, t.q);
  return s;
}

cplx NlsNonlinearity::d1(cplx u, cplx v) const {
  cplx s = 0.0;
  for (const auto& t : terms_)
    if (t.p > 0) s += t.c * static_cast<double>(t.p) * ipow(u, t.p - 1) * ipow(v, t.q);
  return s;
}

cplx NlsNonlinearity::d2(cplx u, cplx v) const {
  cplx s = 0.0;
  for (const auto& t : terms_)
    if (t.q > 0) s += t.c * static_cast<double>(t.q) * ipow(u, t.p) * ipow(v, t.q - 1);
  return s;
}

cplx NlsNonlinearity::gauge_derivative(cplx s) const {
  if (!is_gauge()) throw Unsupported("G' is only defined for gauge-invariant nonlinearities");
  cplx r = 0.0;
  for (const auto& t : terms_) r += t.c * static_cast<double>(t.p) * ipow(s, t.p - 1);
  return r;
}

NlsNonlinearity NlsNonlinearity::scaled(double factor) const {
  auto terms = terms_;
  for (auto& t : terms) t.c *= factor;
  if (factor == 0.0) return {};
  return NlsNonlinearity(std::move(terms));
}

WaveNonlinearity::WaveNonlinearity(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  for (std::size_t k = 0; k < std::min<std::size_t>(2, coeffs_.size()); ++k)
    if (coeffs_[k] != 0.0) throw std::invalid_argument("wave nonlinearity g(u) must be O(u^2)");
}

WaveNonlinearity WaveNonlinearity::cubic(double lambda) { return WaveNonlinearity({0.0, 0.0, 0.0, lambda}); }

bool WaveNonlinearity::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

cplx WaveNonlinearity::force(cplx u) const {
  cplx s = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) s = s * u + coeffs_[k];
  return s;
}

cplx WaveNonlinearity::primitive(cplx u) const {
  cplx s = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    if (coeffs_[k] != 0.0) s += coeffs_[k] * ipow(u, static_cast<int>(k) + 1) / static_cast<double>(k + 1);
  return s;
}

Potential Potential::rational(double numerator, double offset, double slope) {
  Potential p;
  p.kind = Kind::rational;
  p.numerator = numerator;
  p.offset = offset;
  p.slope = slope;
  return p;
}

Potential Potential::table(std::vector<double> values) {
  Potential p;
  p.kind = Kind::coefficients;
  p.values = std::move(values);
  return p;
}

double Potential::operator()(const Point& a) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::rational: {
      double a2 = 0.0;
      for (int c : a) a2 += static_cast<double>(c) * c;
      const double den = offset + slope * a2;
      if (den == 0.0) throw std::invalid_argument("rational potential has a pole on the mode set");
      return numerator / den;
    }
    case Kind::coefficients: {
      const auto n = static_cast<std::size_t>(sup_norm(a));
      return n < values.size() ? values[n] : 0.0;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------- base model

FrequencyModel::FrequencyModel(std::shared_ptr<const IndexSet> set, std::vector<double> omega,
                               double growth_exponent)
    : set_(std::move(set)), omega_(std::move(omega)), growth_exponent_(growth_exponent) {}

double FrequencyModel::growth_constant() const {
  double C = 0.0;
  for (std::size_t k = 0; k < omega_.size(); ++k) {
    const double base = std::max(1, sup_norm(set_->mode(k)));
    C = std::max(C, std::abs(omega_[k]) / std::pow(base, growth_exponent_));
  }
  return C;
}

CVector FrequencyModel::linear_phases(double h) const {
  CVector ph(omega_.size());
  for (std::size_t k = 0; k < omega_.size(); ++k) ph[k] = std::polar(1.0, -omega_[k] * h);
  return ph;
}

void FrequencyModel::linear_flow(State& z, double h) const { linear_flow(z, linear_phases(h)); }

void FrequencyModel::linear_flow(State& z, std::span<const cplx> phases) const {
  auto xi = z.xi();
  auto eta = z.eta();
  for (std::size_t k = 0; k < phases.size(); ++k) {
    xi[k] *= phases[k];
    eta[k] *= std::conj(phases[k]);
  }
}

State FrequencyModel::nonlinear_vector_field(const State& z) const {
  CVector dxi, deta;
  nonlinear_gradient(z, dxi, deta);
  State f(z.index_set_ptr());
  for (std::size_t k = 0; k < z.size(); ++k) {
    f.xi()[k] = -kI * deta[k];
    f.eta()[k] = kI * dxi[k];
  }
  return f;
}

void FrequencyModel::set_filter(std::vector<double> values) {
  if (!values.empty() && values.size() != omega_.size())
    throw std::invalid_argument("filter must have one value per mode");
  if (std::all_of(values.begin(), values.end(), [](double f) { return f == 1.0; })) values.clear();
  filter_ = std::move(values);
}

State FrequencyModel::filtered_copy(const State& z) const {
  State out = z;
  if (filter_.empty()) return out;
  for (std::size_t k = 0; k < filter_.size(); ++k) {
    out.xi()[k] *= filter_[k];
    out.eta()[k] *= filter_[k];
  }
  return out;
}

void FrequencyModel::integrate_nonlinear_ode(State& z, double h) const {
  const std::size_t n = z.size();
  CVector y(2 * n);
  std::copy(z.xi().begin(), z.xi().end(), y.begin());
  std::copy(z.eta().begin(), z.eta().end(), y.begin() + static_cast<std::ptrdiff_t>(n));

  State work(z.index_set_ptr());
  CVector dxi, deta;
  auto rhs = [&](const CVector& s, CVector& ds, double) {
    std::copy(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n), work.xi().begin());
    std::copy(s.begin() + static_cast<std::ptrdiff_t>(n), s.end(), work.eta().begin());
    nonlinear_gradient(work, dxi, deta);
    for (std::size_t k = 0; k < n; ++k) {
      ds[k] = -kI * deta[k];
      ds[n + k] = kI * dxi[k];
    }
  };
  OdeTolerance tol = ode_tol_;
  tol.abs = std::max(tol.abs * std::max(z.norm(), 1e-300), 1e-300);
  integrate_complex_ode(rhs, y, 0.0, h, tol);

  std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n), z.xi().begin());
  std::copy(y.begin() + static_cast<std::ptrdiff_t>(n), y.end(), z.eta().begin());
}

// ---------------------------------------------------------------- pointwise flows

void gauge_flow_pointwise(std::span<cplx> u, std::span<cplx> v, double h, const NlsNonlinearity& g) {
  if (!g.is_gauge()) throw Unsupported("closed-form substep needs a gauge-invariant nonlinearity");
  for (std::size_t b = 0; b < u.size(); ++b) {
    const cplx phase = std::exp(-kI * h * g.gauge_derivative(u[b] * v[b]));
    u[b] *= phase;
    v[b] /= phase;
  }
}

void general_flow_pointwise(std::span<cplx> u, std::span<cplx> v, double h, const NlsNonlinearity& g,
                            const OdeTolerance& tol) {
  if (g.is_zero() || h == 0.0) return;
  const std::size_t n = u.size();
  CVector y(2 * n);
  double scale = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    y[b] = u[b];
    y[n + b] = v[b];
    scale = std::max({scale, std::abs(u[b]), std::abs(v[b])});
  }
  auto rhs = [&](const CVector& s, CVector& ds, double) {
    for (std::size_t b = 0; b < n; ++b) {
      ds[b] = -kI * g.d2(s[b], s[n + b]);
      ds[n + b] = kI * g.d1(s[b], s[n + b]);
    }
  };
  OdeTolerance t = tol;
  t.abs = std::max(tol.abs * scale, 1e-300);
  integrate_complex_ode(rhs, y, 0.0, h, t);
  for (std::size_t b = 0; b < n; ++b) {
    u[b] = y[b];
    v[b] = y[n + b];
  }
}

PhysicalField nls_nonlinear_flow(const PhysicalField& u, double h, const NlsNonlinearity& g) {
  PhysicalField out = u;
  CVector v(u.samples.size());
  std::transform(u.samples.begin(), u.samples.end(), v.begin(), [](cplx c) { return std::conj(c); });
  gauge_flow_pointwise(out.samples, v, h, g);
  return out;
}

PhysicalField general_nonlinear_substep(const PhysicalField& u, double h, const NlsNonlinearity& g,
                                        double tol) {
  PhysicalField out = u;
  CVector v(u.samples.size());
  std::transform(u.samples.begin(), u.samples.end(), v.begin(), [](cplx c) { return std::conj(c); });
  general_flow_pointwise(out.samples, v, h, g, OdeTolerance{tol, tol, 1000000});
  return out;
}

// ---------------------------------------------------------------- NLS

namespace {
std::vector<double> nls_frequencies(const IndexSet& set, const Potential& V) {
  std::vector<double> w(set.size());
  for (std::size_t k = 0; k < set.size(); ++k) {
    const auto& a = set.mode(k);
    double a2 = 0.0;
    for (int c : a) a2 += static_cast<double>(c) * c;
    w[k] = a2 + V(a);
  }
  return w;
}
}  // namespace

NlsModel::NlsModel(int K, Potential potential, NlsNonlinearity nonlinearity)
    : FrequencyModel(std::make_shared<const IndexSet>(IndexSetKind::shifted_box, K, 1),
                     nls_frequencies(IndexSet(IndexSetKind::shifted_box, K, 1), potential), 2.0),
      potential_(std::move(potential)),
      nonlinearity_(std::move(nonlinearity)),
      grid_(std::make_shared<const CollocationGrid>(index_set())) {}

std::unique_ptr<FrequencyModel> NlsModel::clone() const { return std::make_unique<NlsModel>(*this); }

void NlsModel::nonlinear_flow(State& z, double h) const {
  if (nonlinearity_.is_zero() || h == 0.0) return;
  if (filtered()) {
    integrate_nonlinear_ode(z, h);
    return;
  }
  const std::size_t n = grid_->points();
  CVector u(n), v(n);
  grid_->to_physical(z.xi(), u);
  grid_->to_physical_conj(z.eta(), v);
  if (nonlinearity_.is_gauge())
    gauge_flow_pointwise(u, v, h, nonlinearity_);
  else
    general_flow_pointwise(u, v, h, nonlinearity_, substep_tolerance());
  grid_->from_physical(u, z.xi());
  grid_->from_physical_conj(v, z.eta());
}

cplx NlsModel::nonlinear_energy(const State& z) const {
  const State zf = filtered_copy(z);
  const std::size_t n = grid_->points();
  CVector u(n), v(n);
  grid_->to_physical(zf.xi(), u);
  grid_->to_physical_conj(zf.eta(), v);
  cplx s = 0.0;
  for (std::size_t b = 0; b < n; ++b) s += nonlinearity_.value(u[b], v[b]);
  return s * grid_->spacing();
}

void NlsModel::nonlinear_gradient(const State& z, CVector& d_xi, CVector& d_eta) const {
  const State zf = filtered_copy(z);
  const std::size_t n = grid_->points();
  CVector u(n), v(n), w1(n), w2(n);
  grid_->to_physical(zf.xi(), u);
  grid_->to_physical_conj(zf.eta(), v);
  for (std::size_t b = 0; b < n; ++b) {
    w1[b] = nonlinearity_.d1(u[b], v[b]);
    w2[b] = nonlinearity_.d2(u[b], v[b]);
  }
  d_xi.assign(z.size(), 0.0);
  d_eta.assign(z.size(), 0.0);
  grid_->from_physical_conj(w1, d_xi);
  grid_->from_physical(w2, d_eta);
  if (filtered()) {
    for (std::size_t k = 0; k < z.size(); ++k) {
      d_xi[k] *= filter()[k];
      d_eta[k] *= filter()[k];
    }
  }
}

// ---------------------------------------------------------------- wave

namespace {
std::vector<double> wave_frequencies(int K, double m) {
  if (!(m >= 0.0)) throw std::invalid_argument("wave mass m must be nonnegative");
  std::vector<double> w(static_cast<std::size_t>(K) + 1);
  for (int a = 0; a <= K; ++a) w[static_cast<std::size_t>(a)] = std::sqrt(static_cast<double>(a) * a + m);
  return w;
}
}  // namespace

WaveModel::WaveModel(int K, double m, WaveNonlinearity nonlinearity)
    : FrequencyModel(std::make_shared<const IndexSet>(IndexSetKind::nonnegative_box, K, 1),
                     wave_frequencies(K, m), 1.0),
      m_(m),
      nonlinearity_(std::move(nonlinearity)),
      points_(2 * static_cast<std::size_t>(K)) {
  const double pi = std::numbers::pi;
  basis_.resize((static_cast<std::size_t>(K) + 1) * points_);
  for (int a = 0; a <= K; ++a) {
    const double norm = (a == 0 || a == K) ? 1.0 / std::sqrt(2.0 * pi) : 1.0 / std::sqrt(pi);
    for (std::size_t b = 0; b < points_; ++b) {
      const double x = pi * static_cast<double>(b) / K;
      basis_[static_cast<std::size_t>(a) * points_ + b] = a == 0 ? norm : norm * std::cos(a * x);
    }
  }
}

std::unique_ptr<FrequencyModel> WaveModel::clone() const { return std::make_unique<WaveModel>(*this); }

double WaveModel::scale(std::size_t a) const {
  const double w = omega(a);
  return w > 0.0 ? 1.0 / std::sqrt(w) : 1.0;
}

State WaveModel::to_complex(std::span<const cplx> u, std::span<const cplx> v) const {
  const std::size_t n = index_set().size();
  if (u.size() != n || v.size() != n) throw std::invalid_argument("wave coefficients: size mismatch");
  State z(index_set_ptr());
  for (std::size_t a = 0; a < n; ++a) {
    const cplx q = u[a] / scale(a);
    const cplx p = v[a] * scale(a);
    z.xi()[a] = (q + kI * p) / kSqrt2;
    z.eta()[a] = (q - kI * p) / kSqrt2;
  }
  return z;
}

void WaveModel::from_complex(const State& z, CVector& u, CVector& v) const {
  const std::size_t n = z.size();
  u.resize(n);
  v.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const cplx q = (z.xi()[a] + z.eta()[a]) / kSqrt2;
    const cplx p = (z.xi()[a] - z.eta()[a]) / (kI * kSqrt2);
    u[a] = q * scale(a);
    v[a] = p / scale(a);
  }
}

CVector WaveModel::project(std::span<const cplx> samples) const {
  if (samples.size() != points_) throw std::invalid_argument("wave projection: sample count mismatch");
  const std::size_t n = index_set().size();
  const double w = std::numbers::pi / index_set().cutoff();
  CVector c(n);
  for (std::size_t a = 0; a < n; ++a) {
    cplx s = 0.0;
    for (std::size_t b = 0; b < points_; ++b) s += samples[b] * basis(a, b);
    c[a] = w * s;
  }
  return c;
}

CVector WaveModel::force(const State& z) const {
  const State zf = filtered_copy(z);
  const std::size_t n = z.size();
  CVector ucoef(n);
  for (std::size_t a = 0; a < n; ++a) ucoef[a] = scale(a) * (zf.xi()[a] + zf.eta()[a]) / kSqrt2;

  CVector gb(points_);
  for (std::size_t b = 0; b < points_; ++b) {
    cplx s = 0.0;
    for (std::size_t a = 0; a < n; ++a) s += ucoef[a] * basis(a, b);
    gb[b] = nonlinearity_.force(s);
  }
  CVector F = project(gb);
  for (std::size_t a = 0; a < n; ++a) {
    F[a] *= scale(a);
    if (filtered()) F[a] *= filter()[a];
  }
  return F;
}

void WaveModel::nonlinear_flow(State& z, double h) const {
  if (nonlinearity_.is_zero() || h == 0.0) return;
  // P depends on q only, so q is frozen and p receives an exact kick.
  const CVector F = force(z);
  for (std::size_t a = 0; a < z.size(); ++a) {
    const cplx kick = kI * h * F[a] / kSqrt2;
    z.xi()[a] -= kick;
    z.eta()[a] += kick;
  }
}

cplx WaveModel::nonlinear_energy(const State& z) const {
  const State zf = filtered_copy(z);
  const std::size_t n = z.size();
  cplx total = 0.0;
  for (std::size_t b = 0; b < points_; ++b) {
    cplx s = 0.0;
    for (std::size_t a = 0; a < n; ++a) s += scale(a) * (zf.xi()[a] + zf.eta()[a]) / kSqrt2 * basis(a, b);
    total += nonlinearity_.primitive(s);
  }
  return total * (std::numbers::pi / index_set().cutoff());
}

void WaveModel::nonlinear_gradient(const State& z, CVector& d_xi, CVector& d_eta) const {
  const CVector F = force(z);
  d_xi.resize(F.size());
  d_eta.resize(F.size());
  for (std::size_t a = 0; a < F.size(); ++a) d_xi[a] = d_eta[a] = F[a] / kSqrt2;
}

// ---------------------------------------------------------------- factories

std::unique_ptr<NlsModel> nls_model(int K, const Potential& potential, const NlsNonlinearity& nonlinearity) {
  return std::make_unique<NlsModel>(K, potential, nonlinearity);
}

std::unique_ptr<WaveModel> wave_model(int K, double m, const WaveNonlinearity& nonlinearity) {
  return std::make_unique<WaveModel>(K, m, nonlinearity);
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

std::unique_ptr<FrequencyModel> apply_mollifier(const FrequencyModel& model, double h,
                                                const std::function<double(double)>& Phi) {
  auto out = model.clone();
  std::vector<double> values(model.omega().size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = Phi(h * model.omega()[k]);
  out->set_filter(std::move(values));
  return out;
}

}  // namespace hamsplit
