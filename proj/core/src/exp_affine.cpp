#include "qtrans/exp_affine.hpp"

#include <cmath>

namespace qtrans {

ExpAffinePoly::ExpAffinePoly(int n) : n_(n) {
  if (n < 1) throw DomainError("ExpAffinePoly: dimension must be >= 1");
}

ExpAffinePoly ExpAffinePoly::zero(int n) { return ExpAffinePoly(n); }

ExpAffinePoly ExpAffinePoly::from_poly(const HoloPoly& p) {
  ExpAffinePoly f(p.dim());
  if (!p.is_zero()) {
    ExpAffineTerm t;
    t.p = p;
    t.lambda.assign(p.dim(), Complex{0.0, 0.0});
    t.c = Complex{0.0, 0.0};
    f.terms_.push_back(std::move(t));
  }
  return f;
}

void ExpAffinePoly::add_term(ExpAffineTerm t) {
  if (t.p.dim() != n_ || static_cast<int>(t.lambda.size()) != n_)
    throw DomainError("ExpAffinePoly::add_term: dimension mismatch");
  if (t.p.is_zero()) return;
  terms_.push_back(std::move(t));
}

Complex ExpAffinePoly::evaluate(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != n_)
    throw DomainError("ExpAffinePoly::evaluate: point dimension mismatch");
  Complex acc{0.0, 0.0};
  for (const auto& t : terms_) {
    Complex e = t.c;
    for (int i = 0; i < n_; ++i) e += t.lambda[i] * z[i];
    acc += t.p.evaluate(z) * std::exp(e);
  }
  return acc;
}

ExpAffinePoly ExpAffinePoly::wirtinger_derivative(int j) const {
  if (j < 1 || j > n_) throw DomainError("ExpAffinePoly::wirtinger_derivative: axis out of range");
  ExpAffinePoly d(n_);
  for (const auto& t : terms_) {
    // product rule: (p' + lambda_j p) e^{lambda.z + c}
    HoloPoly q = t.p.wirtinger_derivative(j) + t.p.scaled(t.lambda[j - 1]);
    if (q.is_zero()) continue;
    ExpAffineTerm nt;
    nt.p = std::move(q);
    nt.lambda = t.lambda;
    nt.c = t.c;
    d.terms_.push_back(std::move(nt));
  }
  return d;
}

ExpAffinePoly ExpAffinePoly::operator+(const ExpAffinePoly& o) const {
  if (o.n_ != n_) throw DomainError("ExpAffinePoly::operator+: dimension mismatch");
  ExpAffinePoly r = *this;
  r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
  return r;
}

ExpAffinePoly ExpAffinePoly::scaled(Complex c) const {
  ExpAffinePoly r(n_);
  if (c == Complex{0.0, 0.0}) return r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.p = t.p.scaled(c);
  return r;
}

ExpAffinePoly ExpAffinePoly::poly_multiplied(const HoloPoly& q) const {
  ExpAffinePoly r(n_);
  for (const auto& t : terms_) {
    HoloPoly p = t.p * q;
    if (p.is_zero()) continue;
    ExpAffineTerm nt;
    nt.p = std::move(p);
    nt.lambda = t.lambda;
    nt.c = t.c;
    r.terms_.push_back(std::move(nt));
  }
  return r;
}

HoloPoly ExpAffinePoly::taylor(int m) const {
  if (m < 0) throw DomainError("ExpAffinePoly::taylor: order must be >= 0");
  HoloPoly out(n_);
  for (const auto& t : terms_) {
    const Complex ec = std::exp(t.c);
    for (const auto& [alpha, ca] : t.p.terms()) {
      const int base = alpha.total_degree();
      if (base > m) continue;
      // enumerate beta with |beta| <= m - base; coefficient lambda^beta / beta!
      MultiIndex beta(n_);
      const int budget = m - base;
      // iterative odometer over beta
      std::vector<Complex> factor_stack;
      // depth-first enumeration
      std::vector<int> idx(static_cast<std::size_t>(n_), 0);
      // simple recursive lambda
      auto rec = [&](auto&& self, int coord, int used, Complex f) -> void {
        if (coord == n_) {
          out.add_coefficient(alpha.plus(beta), ca * ec * f);
          return;
        }
        Complex fk = f;
        for (int k = 0; used + k <= budget; ++k) {
          beta.e[coord] = static_cast<std::uint32_t>(k);
          self(self, coord + 1, used + k, fk);
          fk *= t.lambda[coord] / static_cast<double>(k + 1);
          if (fk == Complex{0.0, 0.0}) break;
        }
        beta.e[coord] = 0;
      };
      rec(rec, 0, 0, Complex{1.0, 0.0});
    }
  }
  return out;
}

double ExpAffinePoly::coefficient_sup_bound(double r) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double lam = 0.0;
    for (const auto& l : t.lambda) lam += std::norm(l);
    lam = std::sqrt(lam);
    s += t.p.coefficient_sup_bound(r) * std::exp(lam * r + t.c.real());
  }
  return s;
}

double ExpAffinePoly::coefficient_jet_bound(int order, double r) const {
  if (order == 0) return coefficient_sup_bound(r);
  std::vector<ExpAffinePoly> level{*this};
  for (int o = 0; o < order; ++o) {
    std::vector<ExpAffinePoly> next;
    next.reserve(level.size() * n_);
    for (const auto& f : level)
      for (int j = 1; j <= n_; ++j) next.push_back(f.wirtinger_derivative(j));
    level = std::move(next);
  }
  double q = 0.0;
  for (const auto& f : level) {
    double b = f.coefficient_sup_bound(r);
    q += b * b;
  }
  return std::sqrt(q);
}

std::pair<HoloPoly, double> truncate_with_tail_bound(const ExpAffinePoly& f, int m,
                                                     double sup_bound, double eps) {
  if (eps <= 0.0) throw DomainError("truncate_with_tail_bound: eps must be > 0");
  if (m < 0) throw DomainError("truncate_with_tail_bound: m must be >= 0");
  const double R = 1.0 + eps / 2.0;
  const double tail = sup_bound * std::pow(R, -(m + 1)) / (1.0 - 1.0 / R);
  return {f.taylor(m), tail};
}

}  // namespace qtrans
