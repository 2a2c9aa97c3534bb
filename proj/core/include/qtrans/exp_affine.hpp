#pragma once

#include <utility>

#include "qtrans/holo_poly.hpp"

namespace qtrans {

/// One summand p(z) * exp(lambda . z + c).
struct ExpAffineTerm {
  HoloPoly p;
  std::vector<Complex> lambda;
  Complex c{0.0, 0.0};
};

/// Finite sum of polynomial-times-exponential terms. Closed under Wirtinger
/// differentiation and exactly Taylor-expandable to any order.
class ExpAffinePoly {
 public:
  explicit ExpAffinePoly(int n = 1);
  static ExpAffinePoly zero(int n);
  static ExpAffinePoly from_poly(const HoloPoly& p);

  int dim() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::vector<ExpAffineTerm>& terms() const { return terms_; }

  void add_term(ExpAffineTerm t);

  Complex evaluate(std::span<const Complex> z) const;
  Complex evaluate(const Point& z) const { return evaluate(std::span<const Complex>(z)); }

  ExpAffinePoly wirtinger_derivative(int j) const;
  ExpAffinePoly operator+(const ExpAffinePoly& o) const;
  ExpAffinePoly scaled(Complex c) const;
  /// Multiply every term's polynomial part by q.
  ExpAffinePoly poly_multiplied(const HoloPoly& q) const;

  /// Exact Taylor polynomial at 0 of total degree <= m
  /// (coefficients assembled from the lambda^beta / beta! expansion).
  HoloPoly taylor(int m) const;

  /// Coefficient-route sup bound on the closed ball of radius r:
  /// sum over terms of sup|p| * exp(|lambda| r + Re c).
  double coefficient_sup_bound(double r) const;
  double coefficient_jet_bound(int order, double r) const;

 private:
  int n_;
  std::vector<ExpAffineTerm> terms_;
};

/// Degree-m Taylor truncation with a certified tail bound
///
///   tail = M * R^-(m+1) / (1 - 1/R),  R = 1 + eps/2,
///
/// valid as  sup_{B(1)} |f - truncation| <= tail  whenever M bounds |f| on
/// B(1+eps). The bound is the single-variable Cauchy/geometric-series
/// estimate applied along complex lines through the origin (truncation by
/// total degree restricts to truncation of the one-variable series on each
/// line, so the one-variable case suffices).
std::pair<HoloPoly, double> truncate_with_tail_bound(const ExpAffinePoly& f, int m,
                                                     double sup_bound, double eps);

}  // namespace qtrans
