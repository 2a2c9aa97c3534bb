#include "qtrans/diagnostics.hpp"

#include <cmath>

#include "qtrans/nets.hpp"

namespace qtrans {

namespace {

/// d log s - k d'phi at z, Euclidean norm of the holomorphic components.
/// With s = sum P_i e^{k u_i / 2}:
///   d_a s = sum (d_a P_i + k P_i conj(p_{i,a})) e^{k u_i / 2},
/// evaluated with the common weight factored out, and d'phi = conj(z_a) dz_a.
double log_derivative_gap(const FlatModel& model, const SectionSum& s, const Point& z) {
  const int n = model.n;
  const double k = model.k;
  Complex sw{0.0, 0.0};
  std::vector<Complex> num(n, Complex{0.0, 0.0});  // (d_a s - k s conj(z_a)) weighted
  for (const auto& t : s.terms()) {
    Point q(n);
    double q2 = 0.0;
    for (int a = 0; a < n; ++a) {
      q[a] = z[a] - t.p[a];
      q2 += std::norm(q[a]);
    }
    if (0.5 * k * q2 > 45.0) continue;
    const double gamma = std::exp(-0.5 * k * q2);
    double im = 0.0;
    for (int a = 0; a < n; ++a) im += (z[a] * std::conj(t.p[a])).imag();
    const Complex phase{std::cos(k * im), std::sin(k * im)};
    Complex P = t.w0;
    std::vector<Complex> dP(n, Complex{0.0, 0.0});
    const double s2k = std::sqrt(2.0 * k);
    for (std::size_t ri = 0; ri < t.wr.size(); ++ri) {
      const int col = 1 + static_cast<int>(ri);
      Complex uq{0.0, 0.0};
      for (int a = 0; a < n; ++a) uq += std::conj(t.U(a, col)) * q[a];
      P += t.wr[ri] * s2k * uq;
      for (int a = 0; a < n; ++a) dP[a] += t.wr[ri] * s2k * std::conj(t.U(a, col));
    }
    const Complex wgt = phase * gamma;
    sw += P * wgt;
    for (int a = 0; a < n; ++a) num[a] += (dP[a] - k * P * std::conj(q[a])) * wgt;
  }
  if (std::abs(sw) == 0.0) return std::numeric_limits<double>::infinity();
  // d log s - k conj(z) = (d s - k s conj(z)) / s
  double acc = 0.0;
  for (int a = 0; a < n; ++a) acc += std::norm(num[a] / sw);
  return std::sqrt(acc);
}

}  // namespace

LogDerivativeDiagnostic log_derivative_diagnostic(const FlatModel& model, const SectionSum& s,
                                                  double floor, long samples) {
  if (floor <= 0.0) throw DomainError("log_derivative_diagnostic: floor must be > 0");
  LogDerivativeDiagnostic out;
  out.floor = floor;

  // probe directions x inward radial shells covering V = {phi <= 0}
  std::vector<double> radii;
  const double w = 6.0 / std::sqrt(std::max(model.k, 1.0));
  for (int i = 0; i <= 24; ++i) radii.push_back(std::max(0.0, 1.0 - w * i / 24.0));
  for (int i = 1; i <= 8; ++i) radii.push_back(std::max(0.0, 1.0 - w - (1.0 - w) * i / 8.0));

  auto probe = [&](const Point& dir) {
    for (double r : radii) {
      Point z = dir;
      for (auto& c : z) c *= r;
      const double mod = s.weighted_jet(z).abs_value;
      if (mod < floor) {
        ++out.skipped_below_floor;
        continue;
      }
      ++out.probed;
      const double gap = log_derivative_gap(model, s, z);
      if (std::isfinite(gap)) out.sup = std::max(out.sup, gap);
    }
  };

  if (model.n == 1) {
    const long m = std::max<long>(256, samples / static_cast<long>(radii.size()));
    for (long i = 0; i < m; ++i) {
      const double th = 6.283185307179586477 * (i + 0.5) / m;
      probe({Complex{std::cos(th), std::sin(th)}});
    }
  } else {
    HypersurfaceModel sphere = SphereModel{model.n, model.k};
    MetricCloud dirs(sphere, 1.0, 0xd1a6);
    const long m = std::min<long>(dirs.size(),
                                  std::max<long>(256, samples / static_cast<long>(radii.size())));
    const long stride = std::max<long>(1, dirs.size() / m);
    for (long i = 0; i < dirs.size(); i += stride) probe(dirs.point(i));
  }

  out.empty_region = out.probed == 0;
  out.sup_normalized = out.sup / std::sqrt(model.k);
  return out;
}

namespace {

double weight_integrand(double t) { return std::exp(-t * t - 1.0 / t); }

/// adaptive Simpson with absolute tolerance
double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth, double& err) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = weight_integrand(lm), frm = weight_integrand(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  double e1 = 0.0, e2 = 0.0;
  const double r1 = adaptive_simpson(a, m, fa, flm, fm, left, tol / 2.0, depth - 1, e1);
  const double r2 = adaptive_simpson(m, b, fm, frm, fb, right, tol / 2.0, depth - 1, e2);
  err += e1 + e2;
  return r1 + r2;
}

}  // namespace

CompleteWeight complete_weight_g(double x) {
  if (!(x < 0.0)) throw DomainError("complete_weight_g: requires x < 0");
  CompleteWeight out;
  out.g_prime = std::exp(-x * x - 1.0 / x);
  const double lg = -2.0 * x + 1.0 / (x * x);  // (log g')'(x)
  out.g_second = lg * out.g_prime;
  out.margin = lg * std::abs(x);

  // truncate the lower limit: for t <= T0 the integrand is below
  // e^{-t^2 + 1/|T0|}, whose tail integral is < 1e-16 at T0 = -7
  const double T0 = std::min(x - 1.0, -7.0);
  const double tail_bound = std::exp(-T0 * T0 + 1.0 / std::abs(T0)) / (2.0 * std::abs(T0));
  double err = tail_bound;
  const double fa = weight_integrand(T0), fb = weight_integrand(x);
  const double fm = weight_integrand(0.5 * (T0 + x));
  const double whole = (x - T0) / 6.0 * (fa + 4.0 * fm + fb);
  out.g = adaptive_simpson(T0, x, fa, fm, fb, whole, 1e-11, 48, err);
  out.quad_error = err;
  return out;
}

}  // namespace qtrans
