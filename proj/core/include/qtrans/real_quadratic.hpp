#pragma once

#include <Eigen/Dense>

#include "qtrans/holo_poly.hpp"

namespace qtrans {

/// Real-valued quadratic on C^n in the mixed holomorphic/Hermitian form
///
///   phi(z) = a + sum_i Re(a_i z_i) + sum_{ij} Re(a_ij z_i z_j)
///          + sum_{ij} h_ij conj(z_i) z_j
///
/// with a real, a_ij symmetric and (h_ij) Hermitian, so phi(z) is real for
/// every z.
class RealQuadratic {
 public:
  explicit RealQuadratic(int n);

  int dim() const { return n_; }

  double& constant() { return a_; }
  double constant() const { return a_; }
  Eigen::VectorXcd& linear() { return lin_; }
  const Eigen::VectorXcd& linear() const { return lin_; }
  Eigen::MatrixXcd& holomorphic_quadratic() { return quad_; }
  const Eigen::MatrixXcd& holomorphic_quadratic() const { return quad_; }
  /// Hermitian part; entry (i,j) multiplies conj(z_i) z_j.
  Eigen::MatrixXcd& hermitian() { return herm_; }
  const Eigen::MatrixXcd& hermitian() const { return herm_; }

  /// Enforces the symmetry conventions (symmetrizes quad_, Hermitizes herm_).
  void normalize();

  double evaluate(const Point& z) const;

 private:
  int n_;
  double a_;
  Eigen::VectorXcd lin_;
  Eigen::MatrixXcd quad_;
  Eigen::MatrixXcd herm_;
};

/// Output of the quadratic pluriharmonic split: a holomorphic u of degree
/// <= 2 and a factor T with phi(z) - Re u(z) = |T z|^2 (so B = T^* T).
struct PluriharmonicSplit {
  HoloPoly u;
  Eigen::MatrixXcd B;
  Eigen::MatrixXcd T;
};

/// Splits phi into pluriharmonic part Re u plus the positive Hermitian form.
/// Throws MathFailure (reporting the smallest eigenvalue) when the Hermitian
/// part is not positive definite.
PluriharmonicSplit pluriharmonic_split(const RealQuadratic& phi);

}  // namespace qtrans
