#include "qtrans/real_quadratic.hpp"

#include <sstream>

namespace qtrans {

RealQuadratic::RealQuadratic(int n)
    : n_(n),
      a_(0.0),
      lin_(Eigen::VectorXcd::Zero(n)),
      quad_(Eigen::MatrixXcd::Zero(n, n)),
      herm_(Eigen::MatrixXcd::Zero(n, n)) {
  if (n < 1) throw DomainError("RealQuadratic: dimension must be >= 1");
}

void RealQuadratic::normalize() {
  quad_ = ((quad_ + quad_.transpose()) / 2.0).eval();
  herm_ = ((herm_ + herm_.adjoint()) / 2.0).eval();
}

double RealQuadratic::evaluate(const Point& z) const {
  if (static_cast<int>(z.size()) != n_)
    throw DomainError("RealQuadratic::evaluate: point dimension mismatch");
  Eigen::VectorXcd v(n_);
  for (int i = 0; i < n_; ++i) v(i) = z[i];
  double val = a_;
  val += (lin_.transpose() * v).value().real();
  val += (v.transpose() * quad_ * v).value().real();
  val += (v.adjoint() * herm_ * v).value().real();
  return val;
}

PluriharmonicSplit pluriharmonic_split(const RealQuadratic& phi) {
  const int n = phi.dim();
  Eigen::MatrixXcd H = (phi.hermitian() + phi.hermitian().adjoint()) / 2.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  const double lambda_min = es.eigenvalues().minCoeff();
  if (lambda_min <= 0.0) {
    std::ostringstream os;
    os << "pluriharmonic_split: Hermitian part not positive definite"
       << " (smallest eigenvalue " << lambda_min << ")";
    std::ostringstream diag;
    diag << "{\"smallest_eigenvalue\": " << lambda_min << "}";
    throw MathFailure(os.str(), diag.str());
  }

  // u collects the pluriharmonic data: Re u reproduces the constant, linear
  // and holomorphic-quadratic parts of phi.
  HoloPoly u(n);
  u.add_coefficient(MultiIndex(n), Complex{phi.constant(), 0.0});
  for (int i = 0; i < n; ++i) {
    MultiIndex a(n);
    a.e[i] = 1;
    u.add_coefficient(a, phi.linear()(i));
  }
  Eigen::MatrixXcd Q = (phi.holomorphic_quadratic() + phi.holomorphic_quadratic().transpose()) / 2.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (Q(i, j) == Complex{0.0, 0.0}) continue;
      MultiIndex a(n);
      a.e[i] += 1;
      a.e[j] += 1;
      u.add_coefficient(a, Q(i, j));
    }

  Eigen::LLT<Eigen::MatrixXcd> llt(H);
  if (llt.info() != Eigen::Success) {
    std::ostringstream diag;
    diag << "{\"smallest_eigenvalue\": " << lambda_min << "}";
    throw MathFailure("pluriharmonic_split: Cholesky factorization failed", diag.str());
  }

  PluriharmonicSplit out;
  out.u = std::move(u);
  out.B = H;
  out.T = llt.matrixL().adjoint();
  return out;
}

}  // namespace qtrans
