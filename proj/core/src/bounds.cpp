#include "qtrans/bounds.hpp"

#include <cmath>
#include <functional>

#include "qtrans/rng.hpp"

namespace qtrans {

double cauchy_gradient_bound(double sup_bound, double R, double r, int n) {
  if (R <= r) throw DomainError("cauchy_gradient_bound: need R > r");
  return std::sqrt(static_cast<double>(n)) * sup_bound / (R - r);
}

double cauchy_jet_bound(double sup_bound, double R, double r, int n, int order) {
  if (R <= r) throw DomainError("cauchy_jet_bound: need R > r");
  const double rho = (R - r) / std::sqrt(static_cast<double>(n));
  double fact = 1.0;
  for (int i = 2; i <= order; ++i) fact *= i;
  return std::pow(static_cast<double>(n), order / 2.0) * fact * sup_bound /
         std::pow(rho, order);
}

int default_sup_resolution(int n) { return n <= 1 ? 64 : 24; }

namespace {

SupEstimate grid_sup_impl(const std::function<Complex(const Point&)>& eval, int n, double radius,
                          int resolution, double deriv_bound) {
  const int d = 2 * n;
  const double h = 2.0 * radius / (resolution - 1);
  std::vector<int> idx(d, 0);
  Point z(n);
  double sup = 0.0;
  while (true) {
    double norm2 = 0.0;
    std::vector<double> q(d);
    for (int i = 0; i < d; ++i) {
      q[i] = -radius + h * idx[i];
      norm2 += q[i] * q[i];
    }
    if (norm2 > radius * radius) {
      const double s = radius / std::sqrt(norm2);
      for (double& v : q) v *= s;
    }
    for (int i = 0; i < n; ++i) z[i] = Complex{q[2 * i], q[2 * i + 1]};
    sup = std::max(sup, std::abs(eval(z)));
    int i = 0;
    for (; i < d; ++i) {
      if (++idx[i] < resolution) break;
      idx[i] = 0;
    }
    if (i == d) break;
  }
  SupEstimate out;
  out.grid_sup = sup;
  out.resolution = resolution;
  out.radius = radius;
  out.slack = 0.5 * h * std::sqrt(static_cast<double>(d)) * deriv_bound;
  out.bound = out.grid_sup + out.slack;
  return out;
}

}  // namespace

SupEstimate measured_sup_bound(const ExpAffinePoly& f, double radius, int resolution) {
  if (resolution < 2) resolution = default_sup_resolution(f.dim());
  const double d1 = f.coefficient_jet_bound(1, radius);
  return grid_sup_impl([&](const Point& z) { return f.evaluate(z); }, f.dim(), radius, resolution,
                       d1);
}

SupEstimate measured_sup_bound(const HoloPoly& f, double radius, int resolution) {
  return measured_sup_bound(ExpAffinePoly::from_poly(f), radius, resolution);
}

HoloPoly random_polynomial(int n, int degree, double sup_target, std::uint64_t seed, double eps,
                           int resolution) {
  if (degree < 0) throw DomainError("random_polynomial: degree must be >= 0");
  HoloPoly p(n);
  Rng rng(seed, /*stream=*/0xc0ffee);
  // enumerate alpha with |alpha| <= degree in deterministic odometer order
  MultiIndex alpha(n);
  auto rec = [&](auto&& self, int coord, int used) -> void {
    if (coord == n) {
      p.add_coefficient(alpha, rng.normal_complex());
      return;
    }
    for (int k = 0; used + k <= degree; ++k) {
      alpha.e[coord] = static_cast<std::uint32_t>(k);
      self(self, coord + 1, used + k);
    }
    alpha.e[coord] = 0;
  };
  rec(rec, 0, 0);

  const double radius = 1.0 + eps;
  if (resolution < 2) resolution = default_sup_resolution(n);
  const SupEstimate est = measured_sup_bound(p, radius, resolution);
  if (est.bound > 0.0) p = p.scaled(Complex{sup_target / est.bound, 0.0});
  return p;
}

}  // namespace qtrans
