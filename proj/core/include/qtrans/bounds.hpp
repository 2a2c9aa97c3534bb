#pragma once

#include "qtrans/exp_affine.hpp"

namespace qtrans {

/// Grid-measured sup with a certified inflation:
///   bound = grid_sup + (cell half-diagonal) * derivative bound.
struct SupEstimate {
  double grid_sup = 0.0;
  double slack = 0.0;
  double bound = 0.0;
  int resolution = 0;
  double radius = 0.0;
};

/// Explicit one-variable Cauchy constant (the c_{n,1} of the C^0 -> C^1
/// estimate): if |f| <= M on B(R) then |d_i f| <= M/(R-r) on B(r) by the
/// Cauchy integral formula on the disk of radius R-r in the z_i line, so
/// |grad f| <= sqrt(n) M / (R-r).
double cauchy_gradient_bound(double sup_bound, double R, double r, int n);

/// Iterated Cauchy bound for the order-k jet (Frobenius combination over
/// coordinate tuples), via polydisc radius rho = (R-r)/sqrt(n):
/// J_k <= n^{k/2} k! M / rho^k.
double cauchy_jet_bound(double sup_bound, double R, double r, int n, int order);

/// Measures sup |f| over the closed ball B(radius) on a deterministic
/// product grid (`resolution` points per real axis; nodes outside the ball
/// are projected to the sphere) and inflates by the coefficient-route
/// Lipschitz slack.
SupEstimate measured_sup_bound(const ExpAffinePoly& f, double radius, int resolution);
SupEstimate measured_sup_bound(const HoloPoly& f, double radius, int resolution);

/// Deterministic random polynomial corpus generator: degree <= d, complex
/// Gaussian coefficients, rescaled so the measured sup bound over B(1+eps)
/// is <= sup_target.
HoloPoly random_polynomial(int n, int degree, double sup_target, std::uint64_t seed,
                           double eps = 0.25, int resolution = 0);

/// Default grid resolution per complex dimension (64 per real axis at n = 1;
/// coarser in 4 real dimensions, where the slack term covers the gap).
int default_sup_resolution(int n);

}  // namespace qtrans
