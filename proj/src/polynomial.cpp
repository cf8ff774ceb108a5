#include "hamsplit/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hamsplit {

Polynomial::Polynomial(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0) throw std::invalid_argument("polynomial degree cap must be nonnegative");
}

cplx Polynomial::coefficient(const MultiIndex& j) const {
  auto it = terms_.find(j);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

void Polynomial::add(const MultiIndex& j, cplx c) {
  if (static_cast<int>(j.degree()) > max_degree_ || c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(j, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial Polynomial::homogeneous_part(int degree) const {
  Polynomial out(max_degree_);
  for (const auto& [j, c] : terms_)
    if (static_cast<int>(j.degree()) == degree) out.terms_.emplace_hint(out.terms_.end(), j, c);
  return out;
}

Polynomial Polynomial::truncated(int degree) const { return with_max_degree(std::min(degree, max_degree_)); }

Polynomial Polynomial::with_max_degree(int max_degree) const {
  Polynomial out(max_degree);
  for (const auto& [j, c] : terms_)
    if (static_cast<int>(j.degree()) <= max_degree) out.terms_.emplace_hint(out.terms_.end(), j, c);
  return out;
}

double Polynomial::sup_norm() const {
  double m = 0.0;
  for (const auto& [j, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Polynomial::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [j, c] : other.terms_) add(j, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [j, c] : other.terms_) add(j, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(cplx s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [j, c] : terms_) c *= s;
  return *this;
}

Polynomial Polynomial::action(std::size_t mode, int max_degree) {
  Polynomial p(max_degree);
  p.add(MultiIndex{{mode, -1}, {mode, 1}}, 1.0);
  return p;
}

Polynomial Polynomial::quadratic(std::span<const double> omega, int max_degree) {
  Polynomial p(max_degree);
  for (std::size_t a = 0; a < omega.size(); ++a) p.add(MultiIndex{{a, -1}, {a, 1}}, omega[a]);
  return p;
}

Polynomial poisson_bracket(const Polynomial& F, const Polynomial& G, int cap) {
  const cplx I{0.0, 1.0};
  Polynomial out(cap);
  for (const auto& [j, cj] : F.terms()) {
    for (const auto& [k, ck] : G.terms()) {
      if (static_cast<int>(j.degree() + k.degree()) - 2 > cap) continue;
      const auto e = j.entries();
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (i > 0 && e[i] == e[i - 1]) continue;  // distinct entries only
        const SignedIndex partner = e[i].conjugate();
        const int mG = k.count(partner);
        if (mG == 0) continue;
        const int mF = j.count(e[i]);
        // d/deta in F pairs with d/dxi in G (+), d/dxi in F with d/deta in G (-).
        const double sign = e[i].delta < 0 ? 1.0 : -1.0;
        out.add(j.without(e[i]).merged(k.without(partner)), I * sign * static_cast<double>(mF * mG) * cj * ck);
      }
    }
  }
  return out;
}

Polynomial poisson_bracket(const Polynomial& F, const Polynomial& G) {
  return poisson_bracket(F, G, std::min(F.max_degree(), G.max_degree()));
}

cplx evaluate(const Polynomial& P, const State& z) {
  cplx s = 0.0;
  for (const auto& [j, c] : P.terms()) {
    cplx m = c;
    for (const auto& e : j.entries()) m *= z[e];
    s += m;
  }
  return s;
}

void gradient(const Polynomial& P, const State& z, CVector& d_xi, CVector& d_eta) {
  d_xi.assign(z.size(), 0.0);
  d_eta.assign(z.size(), 0.0);
  for (const auto& [j, c] : P.terms()) {
    const auto e = j.entries();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i > 0 && e[i] == e[i - 1]) continue;
      // d(z_j)/dz_{e_i} = m * z_{j without e_i}
      cplx m = c * static_cast<double>(j.count(e[i]));
      bool skipped = false;
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (!skipped && e[k] == e[i]) {
          skipped = true;
          continue;
        }
        m *= z[e[k]];
      }
      (e[i].delta > 0 ? d_xi : d_eta)[e[i].mode] += m;
    }
  }
}

State hamiltonian_vector_field(const Polynomial& P, const State& z) {
  const cplx I{0.0, 1.0};
  CVector dxi, deta;
  gradient(P, z, dxi, deta);
  State f(z.index_set_ptr());
  for (std::size_t a = 0; a < z.size(); ++a) {
    f.xi()[a] = -I * deta[a];
    f.eta()[a] = I * dxi[a];
  }
  return f;
}

bool is_normal_form(const Polynomial& P) {
  return std::all_of(P.terms().begin(), P.terms().end(), [](const auto& kv) { return is_action_class(kv.first); });
}

double reality_defect(const Polynomial& P) {
  double m = 0.0;
  for (const auto& [j, c] : P.terms()) m = std::max(m, std::abs(P.coefficient(j.conjugate()) - std::conj(c)));
  return m;
}

}  // namespace hamsplit
