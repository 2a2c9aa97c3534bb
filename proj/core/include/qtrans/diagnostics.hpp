#pragma once

#include "qtrans/flat_model.hpp"

namespace qtrans {

struct LogDerivativeDiagnostic {
  double floor = 0.0;
  long probed = 0;
  long skipped_below_floor = 0;
  double sup = 0.0;             // sup |d log s - k dphi'| (ambient Euclidean)
  double sup_normalized = 0.0;  // sup / sqrt(k)
  bool empty_region = false;
};

/// Probes {phi <= 0} where the weighted modulus of s exceeds `floor` and
/// measures |d log s(z) - k * sum_a conj(z_a) dz_a| / sqrt(k)
/// (in the flat model d'phi = sum conj(z_a) dz_a).
LogDerivativeDiagnostic log_derivative_diagnostic(const FlatModel& model, const SectionSum& s,
                                                  double floor, long samples = 20000);

struct CompleteWeight {
  double g = 0.0;
  double g_prime = 0.0;
  double g_second = 0.0;
  double margin = 0.0;       // (log g')'(x) |x| = (-2x + x^{-2}) |x|
  double quad_error = 0.0;   // quadrature error estimate for g
};

/// The completeness weight g(x) = int_{-inf}^x e^{-t^2 - 1/t} dt for x < 0:
/// g by adaptive quadrature (abs tol 1e-10), g' and g'' in closed form, and
/// the completeness margin. Throws DomainError for x >= 0.
CompleteWeight complete_weight_g(double x);

}  // namespace qtrans
