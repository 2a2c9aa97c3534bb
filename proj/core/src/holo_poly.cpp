#include "qtrans/holo_poly.hpp"

#include <cmath>

namespace qtrans {

namespace {

Complex int_pow(Complex z, std::uint32_t e) {
  Complex r{1.0, 0.0};
  while (e) {
    if (e & 1u) r *= z;
    z *= z;
    e >>= 1u;
  }
  return r;
}

}  // namespace

HoloPoly::HoloPoly(int n) : n_(n) {
  if (n < 1) throw DomainError("HoloPoly: dimension must be >= 1");
}

HoloPoly HoloPoly::zero(int n) { return HoloPoly(n); }

HoloPoly HoloPoly::constant(int n, Complex c) {
  HoloPoly p(n);
  p.set_coefficient(MultiIndex(n), c);
  return p;
}

HoloPoly HoloPoly::monomial(int n, const MultiIndex& alpha, Complex c) {
  if (alpha.dim() != n) throw DomainError("HoloPoly::monomial: index dimension mismatch");
  HoloPoly p(n);
  p.set_coefficient(alpha, c);
  return p;
}

HoloPoly HoloPoly::coordinate(int n, int j) {
  if (j < 1 || j > n) throw DomainError("HoloPoly::coordinate: axis out of range");
  MultiIndex a(n);
  a.e[j - 1] = 1;
  return monomial(n, a, Complex{1.0, 0.0});
}

int HoloPoly::degree() const {
  if (coef_.empty()) return kDegreeZero;
  int d = 0;
  for (const auto& [a, c] : coef_) d = std::max(d, a.total_degree());
  return d;
}

Complex HoloPoly::coefficient(const MultiIndex& alpha) const {
  auto it = coef_.find(alpha);
  return it == coef_.end() ? Complex{0.0, 0.0} : it->second;
}

void HoloPoly::set_coefficient(const MultiIndex& alpha, Complex c) {
  if (alpha.dim() != n_) throw DomainError("HoloPoly::set_coefficient: index dimension mismatch");
  if (c == Complex{0.0, 0.0})
    coef_.erase(alpha);
  else
    coef_[alpha] = c;
}

void HoloPoly::add_coefficient(const MultiIndex& alpha, Complex c) {
  set_coefficient(alpha, coefficient(alpha) + c);
}

Complex HoloPoly::evaluate(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != n_)
    throw DomainError("HoloPoly::evaluate: point dimension mismatch");
  Complex acc{0.0, 0.0};
  for (const auto& [a, c] : coef_) {
    Complex t = c;
    for (int i = 0; i < n_; ++i)
      if (a.e[i]) t *= int_pow(z[i], a.e[i]);
    acc += t;
  }
  return acc;
}

HoloPoly HoloPoly::wirtinger_derivative(int j) const {
  if (j < 1 || j > n_) throw DomainError("HoloPoly::wirtinger_derivative: axis out of range");
  HoloPoly d(n_);
  const int jj = j - 1;
  for (const auto& [a, c] : coef_) {
    if (a.e[jj] == 0) continue;
    MultiIndex b = a;
    b.e[jj] -= 1;
    d.add_coefficient(b, c * static_cast<double>(a.e[jj]));
  }
  d.prune();
  return d;
}

HoloPoly HoloPoly::operator+(const HoloPoly& o) const {
  if (o.n_ != n_) throw DomainError("HoloPoly::operator+: dimension mismatch");
  HoloPoly r = *this;
  for (const auto& [a, c] : o.coef_) r.add_coefficient(a, c);
  r.prune();
  return r;
}

HoloPoly HoloPoly::operator-(const HoloPoly& o) const {
  return *this + o.scaled(Complex{-1.0, 0.0});
}

HoloPoly HoloPoly::operator*(const HoloPoly& o) const {
  if (o.n_ != n_) throw DomainError("HoloPoly::operator*: dimension mismatch");
  HoloPoly r(n_);
  for (const auto& [a, ca] : coef_)
    for (const auto& [b, cb] : o.coef_) r.add_coefficient(a.plus(b), ca * cb);
  r.prune();
  return r;
}

HoloPoly HoloPoly::scaled(Complex c) const {
  HoloPoly r(n_);
  if (c == Complex{0.0, 0.0}) return r;
  for (const auto& [a, ca] : coef_) r.coef_[a] = ca * c;
  return r;
}

double HoloPoly::coefficient_sup_bound(double r) const {
  double s = 0.0;
  for (const auto& [a, c] : coef_) s += std::abs(c) * std::pow(r, a.total_degree());
  return s;
}

double HoloPoly::coefficient_jet_bound(int order, double r) const {
  // Frobenius-style bound: sum over ordered derivative tuples of the
  // coefficient sup bounds of the corresponding symbolic derivatives,
  // combined in quadrature. Exact symbolic differentiation keeps this tight
  // for the low orders (<= 3) used by the certification slack.
  if (order == 0) return coefficient_sup_bound(r);
  std::vector<HoloPoly> level{*this};
  for (int o = 0; o < order; ++o) {
    std::vector<HoloPoly> next;
    next.reserve(level.size() * n_);
    for (const auto& p : level)
      for (int j = 1; j <= n_; ++j) next.push_back(p.wirtinger_derivative(j));
    level = std::move(next);
  }
  double q = 0.0;
  for (const auto& p : level) {
    double b = p.coefficient_sup_bound(r);
    q += b * b;
  }
  return std::sqrt(q);
}

void HoloPoly::prune() {
  for (auto it = coef_.begin(); it != coef_.end();) {
    if (it->second == Complex{0.0, 0.0})
      it = coef_.erase(it);
    else
      ++it;
  }
}

}  // namespace qtrans
