#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qtrans/errors.hpp"
#include "qtrans/multi_index.hpp"

namespace qtrans {

/// Sparse real polynomial on R^n.
class RealPoly {
 public:
  explicit RealPoly(int n = 1);
  static RealPoly constant(int n, double c);
  static RealPoly coordinate(int n, int j);  // 1-based

  int dim() const { return n_; }
  int degree() const;
  bool is_zero() const { return coef_.empty(); }
  const std::map<MultiIndex, double>& terms() const { return coef_; }

  void add_coefficient(const MultiIndex& a, double c);
  double evaluate(const std::vector<double>& x) const;
  RealPoly derivative(int j) const;  // 1-based
  RealPoly operator+(const RealPoly& o) const;
  RealPoly operator*(const RealPoly& o) const;
  RealPoly scaled(double c) const;
  double coefficient_norm() const;  // l2 norm of the coefficient vector

 private:
  void prune();
  int n_;
  std::map<MultiIndex, double> coef_;
};

/// Real algebraic set X = {g_1 = ... = g_s = 0} in R^n with degree and
/// nominal codimension bookkeeping.
struct VarietySpec {
  int n = 2;
  std::vector<RealPoly> polys;
  int degree = 1;      // max degree of the defining polynomials
  int codim = 1;       // nominal codimension m
};

/// ceil((m!/n! * d^n)^{1/(m-n)}): the hypersurface degree bound for the image
/// of a degree-d polynomial map R^n -> R^m, n < m. Also asserts the
/// pigeonhole dimension count binom(m+D, m) > binom(n+dD, n).
int auroux_degree_bound(int n, int m, int d);

/// d (2d-1)^(n-1): bound on the number of connected components of a real
/// algebraic set in R^n cut out by polynomials of degree <= d.
std::uint64_t milnor_bound(int n, int d);

struct ContainmentWitness {
  RealPoly G;
  int degree_bound = 0;
  double residual = 0.0;          // max |G(F(t))| over a validation grid, unit coef norm
  double smallest_singular = 0.0; // sigma_min of the composition matrix
  bool dimension_count_ok = false;
};

/// Finds a nonzero G of degree <= D with G(F(.)) = 0, via the null space of
/// the linear map (coefficients of G) -> (coefficients of G o F). Throws
/// MathFailure with the smallest singular value when the numerical null
/// space is empty at tolerance.
ContainmentWitness containment_hypersurface(const std::vector<RealPoly>& F, int D,
                                            double null_tol = 1e-10);

struct TubeEstimate {
  double eps = 0.0;
  long samples = 0;
  long hits = 0;
  long descent_failures = 0;
  double estimate = 0.0;
  double ci_halfwidth = 0.0;  // 99% normal-approximation binomial half-width
};

/// Monte Carlo volume of N_eps(X) within the unit cube. Membership of a
/// sample p is decided by Gauss-Newton/Armijo descent on sum g_i^2 started
/// at p (50 steps); a hit requires landing on X within eps of p. Failures to
/// reach X count as misses and are tallied (the estimate is biased low,
/// never high).
TubeEstimate tube_volume(const VarietySpec& X, double eps, long samples, std::uint64_t seed);

}  // namespace qtrans
