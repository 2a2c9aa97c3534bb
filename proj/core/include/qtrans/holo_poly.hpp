#pragma once

#include <complex>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "qtrans/errors.hpp"
#include "qtrans/multi_index.hpp"

namespace qtrans {

using Complex = std::complex<double>;
using Point = std::vector<Complex>;

/// Sparse multivariate holomorphic polynomial with complex coefficients.
///
/// Coefficients are stored by multi-index; exact zeros are pruned after every
/// operation. The degree of the zero polynomial is the sentinel
/// `HoloPoly::kDegreeZero` (standing in for minus infinity).
class HoloPoly {
 public:
  static constexpr int kDegreeZero = std::numeric_limits<int>::min();

  explicit HoloPoly(int n = 1);
  static HoloPoly zero(int n);
  static HoloPoly constant(int n, Complex c);
  static HoloPoly monomial(int n, const MultiIndex& alpha, Complex c);
  /// The coordinate function z_j (1-based axis).
  static HoloPoly coordinate(int n, int j);

  int dim() const { return n_; }
  int degree() const;
  bool is_zero() const { return coef_.empty(); }
  std::size_t term_count() const { return coef_.size(); }

  Complex coefficient(const MultiIndex& alpha) const;
  void set_coefficient(const MultiIndex& alpha, Complex c);
  void add_coefficient(const MultiIndex& alpha, Complex c);

  const std::map<MultiIndex, Complex>& terms() const { return coef_; }

  Complex evaluate(std::span<const Complex> z) const;
  Complex evaluate(const Point& z) const { return evaluate(std::span<const Complex>(z)); }

  /// Exact Wirtinger derivative d/dz_j (1-based axis).
  HoloPoly wirtinger_derivative(int j) const;

  HoloPoly operator+(const HoloPoly& o) const;
  HoloPoly operator-(const HoloPoly& o) const;
  HoloPoly operator*(const HoloPoly& o) const;
  HoloPoly scaled(Complex c) const;

  /// Sum of |c_alpha| * r^|alpha| over all terms: a sup bound on the closed
  /// ball of radius r (coefficient route, no Cauchy inflation needed).
  double coefficient_sup_bound(double r) const;
  /// Same route for the Euclidean norm of the order-`order` jet on B(r):
  /// sum over terms of |c_alpha| * (max_alpha derivative factor) * r^(|alpha|-order).
  double coefficient_jet_bound(int order, double r) const;

 private:
  void prune();
  int n_;
  std::map<MultiIndex, Complex> coef_;
};

}  // namespace qtrans
