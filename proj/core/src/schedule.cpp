#include "qtrans/schedule.hpp"

#include <cmath>
#include <sstream>

namespace qtrans {

std::vector<double> eta_schedule(double p_exp, int M) {
  if (p_exp < 1.0) throw DomainError("eta_schedule: p_exp must be >= 1");
  if (M < 1) throw DomainError("eta_schedule: M must be >= 1");
  std::vector<double> eta;
  eta.reserve(M + 1);
  eta.push_back(0.25);
  for (int j = 1; j <= M; ++j) {
    const double prev = eta.back();
    const double next = prev * std::pow(std::abs(std::log(prev)), -p_exp);
    if (!(next > 1e-300)) {
      std::ostringstream diag;
      diag << "{\"j\": " << j << ", \"eta_prev\": " << prev << "}";
      throw MathFailure("eta_schedule: underflow below 1e-300", diag.str());
    }
    eta.push_back(next);
  }
  return eta;
}

bool Schedule::selection_inequality_holds() const {
  for (bool ok : key_inequality_ok)
    if (!ok) return false;
  return true;
}

Schedule make_schedule(double p_exp, int M, double A, double B, double D, double floor) {
  Schedule s;
  s.p_exp = p_exp;
  s.A = A;
  s.B = B;
  s.D = D;
  s.M = M;
  s.floor = floor;
  if (floor <= 0.0) {
    s.eta = eta_schedule(p_exp, M);
  } else {
    // the exact recursion is monotone below the floor, so past double
    // underflow the working value is the floor regardless; record zeros
    s.eta.push_back(0.25);
    for (int j = 1; j <= M; ++j) {
      const double prev = s.eta.back();
      double next = 0.0;
      if (prev > 0.0) next = prev * std::pow(std::abs(std::log(prev)), -p_exp);
      if (!(next > 1e-300)) {
        next = 0.0;
        if (s.exact_underflow_at < 0) s.exact_underflow_at = j;
      }
      s.eta.push_back(next);
    }
  }
  s.eta_eff = s.eta;
  if (floor > 0.0)
    for (auto& e : s.eta_eff) e = std::max(e, floor);
  s.key_inequality_ok.resize(M);
  const double lhs = std::exp(-D * D / 9.0);
  for (int j = 1; j <= M; ++j) {
    const double rhs = (1.0 / B) * std::pow(std::abs(std::log(s.eta_eff[j - 1])), -p_exp);
    s.key_inequality_ok[j - 1] = lhs <= rhs;
  }
  return s;
}

int select_constants(int n, double p_exp, double B,
                     const std::function<double(int)>& calibration) {
  (void)n;
  if (B <= 0.0) throw DomainError("select_constants: B must be > 0");
  std::ostringstream curve;
  curve << "[";
  for (int D = 1; D <= 10000; ++D) {
    const double M = calibration(D);
    if (!(M >= 1.0)) throw DomainError("select_constants: calibration must return M >= 1");
    const double lhs = std::exp(-static_cast<double>(D) * D / 9.0);
    const double lnM = M > 1.0 ? std::log(M) : 1.0;  // M ln M degenerates at M = 1
    const double rhs = (1.0 / B) * std::pow(M * lnM, -p_exp);
    if (lhs <= rhs) return D;
    if (D <= 32) {
      if (D > 1) curve << ", ";
      curve << "[" << D << ", " << lhs << ", " << rhs << "]";
    }
  }
  std::ostringstream diag;
  diag << "{\"curve_lhs_rhs\": " << curve.str() << "]}";
  throw MathFailure("select_constants: no admissible D <= 10000", diag.str());
}

}  // namespace qtrans
