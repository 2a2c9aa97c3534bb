#pragma once

#include <functional>
#include <vector>

#include "qtrans/errors.hpp"

namespace qtrans {

/// The transversality schedule eta_0 = 1/4, eta_j = eta_{j-1} |ln eta_{j-1}|^{-p}.
/// eta_eff is the working sequence used by the construction: identical to eta
/// unless a positive floor is configured, in which case eta_eff_j =
/// max(eta_j, floor) (the exact recursion underflows long before double
/// precision runs out of colors otherwise; the floor is recorded).
struct Schedule {
  double p_exp = 3.0;
  double A = 2.0;
  double B = 10.0;
  double D = 4.0;
  int M = 1;
  double floor = 0.0;
  std::vector<double> eta;      // eta_0 .. eta_M, exact recursion (0 past underflow)
  std::vector<double> eta_eff;  // floored working sequence
  std::vector<bool> key_inequality_ok;  // e^{-D^2/9} <= (1/B)|ln eta_eff_{j-1}|^{-p}, j = 1..M
  int exact_underflow_at = -1;  // first j where the exact recursion left double range

  bool selection_inequality_holds() const;
};

/// Exact recursion from eta_0 = 1/4 (natural log). Throws MathFailure on
/// underflow below 1e-300.
std::vector<double> eta_schedule(double p_exp, int M);

/// Full schedule assembly with the floor and the per-color key-inequality
/// record.
Schedule make_schedule(double p_exp, int M, double A, double B, double D, double floor = 0.0);

/// Smallest integer D <= 10^4 with e^{-D^2/9} <= (1/B) (M ln M)^{-p} where
/// M = calibration(D) (the rough-asymptotics form of the selection rule).
/// Throws MathFailure with a diagnostic curve when no such D exists.
int select_constants(int n, double p_exp, double B,
                     const std::function<double(int)>& calibration);

}  // namespace qtrans
