#include "qtrans/construct.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <limits>
#include <numbers>
#include <sstream>

#include "qtrans/rng.hpp"

namespace qtrans {

double cap_constant(int n) {
  if (n <= 1) return 1.0;
  // max over t >= 0 of sqrt(1+t^2) e^{-5t^2/36}, attained at t^2 = 13/5
  return std::sqrt(18.0 / 5.0) * std::exp(-13.0 / 36.0);
}

namespace {

double default_A(int n) { return n <= 1 ? 2.0 : 1.6; }
double default_D(int n) { return n <= 1 ? 4.0 : 6.0; }
double default_density(int n) { return n <= 1 ? 50.0 : 4.0; }

/// max over x >= 0 of x^m e^{-k x^2 / 2}
double weighted_power_max(double k, int m) {
  if (m == 0) return 1.0;
  return std::pow(m / (k * std::numbers::e), m / 2.0);
}

/// Chart patch on the pulled-back hypersurface {phi o Psi = 0}: parameters q
/// are the wall coordinates (Im z1, Re z2, ...); Re z1 rides the graph
/// x = -sqrt(2k) + sqrt(2k - |q|^2).
class GraphWallGeometry : public CellGeometry {
 public:
  GraphWallGeometry(int n, double rho, double k) : n_(n), rho_(rho), k_(k) {
    grad_factor_ = std::sqrt(1.0 + rho * rho / (2.0 * k - rho * rho));
  }
  int param_dim() const override { return 2 * n_ - 1; }

  std::vector<Cell> root_cells(double h_root) const override {
    WallPatchGeometry wall(n_, rho_);
    return wall.root_cells(h_root);
  }

  std::optional<Point> center(const Cell& c, double& radius) const override {
    const int d = param_dim();
    std::vector<double> q(d);
    double half2 = 0.0, min2 = 0.0;
    for (int i = 0; i < d; ++i) {
      q[i] = 0.5 * (c.lo[i] + c.hi[i]);
      const double hw = 0.5 * (c.hi[i] - c.lo[i]);
      half2 += hw * hw;
      double nearest = 0.0;
      if (c.lo[i] > 0.0) nearest = c.lo[i];
      else if (c.hi[i] < 0.0) nearest = -c.hi[i];
      min2 += nearest * nearest;
    }
    if (min2 > rho_ * rho_) return std::nullopt;
    double qn = 0.0;
    for (double v : q) qn += v * v;
    qn = std::sqrt(qn);
    double shift = 0.0;
    if (qn > rho_) {
      const double sc = rho_ / qn;
      shift = qn - rho_;
      for (double& v : q) v *= sc;
    }
    radius = (std::sqrt(half2) + shift) * grad_factor_;
    double q2 = 0.0;
    for (double v : q) q2 += v * v;
    const double x = -std::sqrt(2.0 * k_) + std::sqrt(std::max(0.0, 2.0 * k_ - q2));
    Point z(n_);
    z[0] = Complex{x, q[0]};
    for (int j = 1; j < n_; ++j) z[j] = Complex{q[2 * j - 1], q[2 * j]};
    return z;
  }

 private:
  int n_;
  double rho_;
  double k_;
  double grad_factor_ = 1.0;
};

/// Weighted chart functional for a section quotient Q and perturbation w:
///
///   T(z) = gamma(z) [ |Q_w(z)| + || dQ_w restricted to the pulled-back
///          Levi frame + sqrt(k/2) v_1 Q_w || ],  gamma = e^{-|z|^2/4},
///
/// which equals the section transversality |s|_w + (2k)^{-1/2} |ds|_xi at
/// the ambient image point (the reference section contributes exactly the
/// sqrt(k/2) dz_1 logarithmic term in the chart). Terms are affine
/// polynomials times exponentials, evaluated in one fused pass; jet bounds
/// come from the per-term closed forms.
class QuotientEvaluator : public TEvaluator {
 public:
  QuotientEvaluator(const ExpAffinePoly& Q, const ChartFrame& chart, double k, double rho,
                    double tail, double wmax)
      : n_(Q.dim()), chart_(chart), k_(k), rho_(rho), tail_(tail) {
    if (n_ > 2) throw DomainError("QuotientEvaluator: n <= 2 only");
    terms_.reserve(Q.terms().size());
    double j1 = 0.0, j2 = 0.0, j3 = 0.0;
    double j0f = 0.0, j1f = 0.0, j2f = 0.0, j3f = 0.0, j4f = 0.0;  // far suffix (L > kLnear)
    for (const auto& t : Q.terms()) {
      FusedTerm ft;
      for (int a = 0; a < n_; ++a) {
        ft.lre[a] = t.lambda[a].real();
        ft.lim[a] = t.lambda[a].imag();
      }
      ft.cre = t.c.real();
      ft.cim = t.c.imag();
      for (const auto& [alpha, coef] : t.p.terms()) {
        const int deg = alpha.total_degree();
        if (deg == 0) {
          ft.p0re = coef.real();
          ft.p0im = coef.imag();
        } else if (deg == 1) {
          for (int a = 0; a < n_; ++a)
            if (alpha.e[a] == 1) {
              ft.p1re[a] = coef.real();
              ft.p1im[a] = coef.imag();
            }
        } else {
          throw DomainError("QuotientEvaluator: quotient terms must be affine");
        }
      }
      double L2 = 0.0, P12 = 0.0;
      for (int a = 0; a < n_; ++a) {
        L2 += ft.lre[a] * ft.lre[a] + ft.lim[a] * ft.lim[a];
        P12 += ft.p1re[a] * ft.p1re[a] + ft.p1im[a] * ft.p1im[a];
      }
      const double L = std::sqrt(L2);
      const double dp = std::sqrt(P12);
      const double pb = std::hypot(ft.p0re, ft.p0im) + rho * dp;
      const double env = std::exp(L * rho + ft.cre);
      j1 += (L * pb + dp) * env;
      j2 += (L * L * pb + 2.0 * L * dp) * env;
      j3 += (L * L * L * pb + 3.0 * L * L * dp) * env;
      ft.L = L;
      ft.dp = dp;
      if (L > kLnear) {
        j0f += pb * env;
        j1f += (L * pb + dp) * env;
        j2f += (L * L * pb + 2.0 * L * dp) * env;
        j3f += (L * L * L * pb + 3.0 * L * L * dp) * env;
        j4f += (L * L * L * L * pb + 4.0 * L * L * L * dp) * env;
      }
      terms_.push_back(ft);
    }
    far_j0_ = j0f;
    far_j1_ = j1f;
    far_j2_ = j2f;
    far_j3_ = j3f;
    far_j4_ = j4f;
    w_[0] = w_[1] = Complex{0.0, 0.0};

    const double J0 = Q.coefficient_sup_bound(rho) + wmax * (1.0 + rho);
    const double J1 = j1 + wmax;
    const double J2 = j2;
    const double J3 = j3;
    const double s = 1.0 / std::sqrt(2.0 * k);
    kappa_v_ = 2.2 * s;
    tilt_max_ = std::min(1.0, 1.3 * s * rho);
    const double sk2 = std::sqrt(0.5 * k);

    sk2_ = sk2;
    hess_f_ = assemble_hess_f(J0, J1, J2);
    hess_df_ = assemble_hess_df(J0, J1, J2, J3);
    wmax_ = wmax;
  }

  double assemble_hess_f(double J0, double J1, double J2) const {
    return J2 + rho_ * J1 + (0.5 + 0.25 * rho_ * rho_) * J0;
  }

  double assemble_hess_df(double J0, double J1, double J2, double J3) const {
    const double hd = J3 + 2.0 * kappa_v_ * J2 + sk2_ * (kappa_v_ * J1 + tilt_max_ * J2) +
                      sk2_ * kappa_v_ * J1 +
                      0.5 * rho_ * (J2 + kappa_v_ * J1 + sk2_ * (kappa_v_ * J0 + tilt_max_ * J1)) +
                      0.5 * (J1 + sk2_ * tilt_max_ * J0);
    return 1.25 * hd;
  }

  void set_w(std::span<const Complex> w) {
    for (int a = 0; a < n_; ++a) w_[a] = w[a];
  }

  TSample sample(const Point& z, double cell_radius) const override {
    TSample out;
    double zn2 = 0.0;
    for (const auto& c : z) zn2 += std::norm(c);
    const double gamma = std::exp(-0.25 * zn2);
    const double znorm = std::sqrt(zn2);

    // fused raw-double pass: value, gradient, Hessian and third derivatives
    // of Q at z, plus cell-local jet-envelope accumulators
    const double zr0 = z[0].real(), zi0 = z[0].imag();
    const double zr1 = n_ == 2 ? z[1].real() : 0.0;
    const double zi1 = n_ == 2 ? z[1].imag() : 0.0;
    double fre = 0.0, fim = 0.0;
    double dfre[2] = {0, 0}, dfim[2] = {0, 0};
    double d2re[3] = {0, 0, 0}, d2im[3] = {0, 0, 0};
    double d3re[4] = {0, 0, 0, 0}, d3im[4] = {0, 0, 0, 0};
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    const double r = cell_radius;
    for (const auto& t : terms_) {
      double ere = t.cre + t.lre[0] * zr0 - t.lim[0] * zi0;
      double eim = t.cim + t.lre[0] * zi0 + t.lim[0] * zr0;
      if (n_ == 2) {
        ere += t.lre[1] * zr1 - t.lim[1] * zi1;
        eim += t.lre[1] * zi1 + t.lim[1] * zr1;
      }
      if (ere < -44.0) continue;  // below 8e-20 of scale: negligible vs jets
      const double mag = std::exp(ere);
      double sn, cs;
      __builtin_sincos(eim, &sn, &cs);
      const double exre = mag * cs;
      const double exim = mag * sn;

      double Pre = t.p0re + t.p1re[0] * zr0 - t.p1im[0] * zi0;
      double Pim = t.p0im + t.p1re[0] * zi0 + t.p1im[0] * zr0;
      if (n_ == 2) {
        Pre += t.p1re[1] * zr1 - t.p1im[1] * zi1;
        Pim += t.p1re[1] * zi1 + t.p1im[1] * zr1;
      }

      fre += Pre * exre - Pim * exim;
      fim += Pre * exim + Pim * exre;

      // g_a = p1_a + lambda_a P ; h_ab = lambda_a p1_b + lambda_b p1_a
      //                                  + lambda_a lambda_b P
      double lPre[2], lPim[2];
      for (int a = 0; a < n_; ++a) {
        lPre[a] = t.lre[a] * Pre - t.lim[a] * Pim;
        lPim[a] = t.lre[a] * Pim + t.lim[a] * Pre;
        const double gre = t.p1re[a] + lPre[a];
        const double gim = t.p1im[a] + lPim[a];
        dfre[a] += gre * exre - gim * exim;
        dfim[a] += gre * exim + gim * exre;
      }
      auto acc2 = [&](int slot, double ure, double uim) {
        d2re[slot] += ure * exre - uim * exim;
        d2im[slot] += ure * exim + uim * exre;
      };
      auto acc3 = [&](int slot, double ure, double uim) {
        d3re[slot] += ure * exre - uim * exim;
        d3im[slot] += ure * exim + uim * exre;
      };
      // lambda products
      const double l00re = t.lre[0] * t.lre[0] - t.lim[0] * t.lim[0];
      const double l00im = 2.0 * t.lre[0] * t.lim[0];
      const double h11re = 2.0 * (t.lre[0] * t.p1re[0] - t.lim[0] * t.p1im[0]) +
                           l00re * Pre - l00im * Pim;
      const double h11im = 2.0 * (t.lre[0] * t.p1im[0] + t.lim[0] * t.p1re[0]) +
                           l00re * Pim + l00im * Pre;
      acc2(0, h11re, h11im);
      // d3_111 = 3 l0^2 p1_0 + l0^3 P = l0 * (2 h11 - l0^2 P) + l0^2 (p1_0 + l0 P)
      {
        const double u1re = l00re * t.p1re[0] - l00im * t.p1im[0];
        const double u1im = l00re * t.p1im[0] + l00im * t.p1re[0];
        const double l3re = l00re * t.lre[0] - l00im * t.lim[0];
        const double l3im = l00re * t.lim[0] + l00im * t.lre[0];
        acc3(0, 3.0 * u1re + l3re * Pre - l3im * Pim,
             3.0 * u1im + l3re * Pim + l3im * Pre);
      }
      if (n_ == 2) {
        const double l01re = t.lre[0] * t.lre[1] - t.lim[0] * t.lim[1];
        const double l01im = t.lre[0] * t.lim[1] + t.lim[0] * t.lre[1];
        const double l11re = t.lre[1] * t.lre[1] - t.lim[1] * t.lim[1];
        const double l11im = 2.0 * t.lre[1] * t.lim[1];
        const double h12re = (t.lre[0] * t.p1re[1] - t.lim[0] * t.p1im[1]) +
                             (t.lre[1] * t.p1re[0] - t.lim[1] * t.p1im[0]) +
                             l01re * Pre - l01im * Pim;
        const double h12im = (t.lre[0] * t.p1im[1] + t.lim[0] * t.p1re[1]) +
                             (t.lre[1] * t.p1im[0] + t.lim[1] * t.p1re[0]) +
                             l01re * Pim + l01im * Pre;
        const double h22re = 2.0 * (t.lre[1] * t.p1re[1] - t.lim[1] * t.p1im[1]) +
                             l11re * Pre - l11im * Pim;
        const double h22im = 2.0 * (t.lre[1] * t.p1im[1] + t.lim[1] * t.p1re[1]) +
                             l11re * Pim + l11im * Pre;
        acc2(1, h12re, h12im);
        acc2(2, h22re, h22im);
        // third derivatives: 112, 122, 222 (111 handled above)
        const double q0re = t.p1re[0], q0im = t.p1im[0];
        const double q1re = t.p1re[1], q1im = t.p1im[1];
        {
          // l0^2 q1 + 2 l0 l1 q0 + l0^2 l1 P
          const double v1re = l00re * q1re - l00im * q1im;
          const double v1im = l00re * q1im + l00im * q1re;
          const double v2re = 2.0 * (l01re * q0re - l01im * q0im);
          const double v2im = 2.0 * (l01re * q0im + l01im * q0re);
          const double l001re = l00re * t.lre[1] - l00im * t.lim[1];
          const double l001im = l00re * t.lim[1] + l00im * t.lre[1];
          acc3(1, v1re + v2re + l001re * Pre - l001im * Pim,
               v1im + v2im + l001re * Pim + l001im * Pre);
        }
        {
          const double v1re = l11re * q0re - l11im * q0im;
          const double v1im = l11re * q0im + l11im * q0re;
          const double v2re = 2.0 * (l01re * q1re - l01im * q1im);
          const double v2im = 2.0 * (l01re * q1im + l01im * q1re);
          const double l011re = l11re * t.lre[0] - l11im * t.lim[0];
          const double l011im = l11re * t.lim[0] + l11im * t.lre[0];
          acc3(2, v1re + v2re + l011re * Pre - l011im * Pim,
               v1im + v2im + l011re * Pim + l011im * Pre);
        }
        {
          const double v1re = l11re * q1re - l11im * q1im;
          const double v1im = l11re * q1im + l11im * q1re;
          const double l3re = l11re * t.lre[1] - l11im * t.lim[1];
          const double l3im = l11re * t.lim[1] + l11im * t.lre[1];
          acc3(3, 3.0 * v1re + l3re * Pre - l3im * Pim,
               3.0 * v1im + l3re * Pim + l3im * Pre);
        }
      }
      if (t.L <= kLnear) {
        const double pbz = std::hypot(Pre, Pim) + t.dp * r;
        const double L = t.L;
        a1 += (L * pbz + t.dp) * mag;
        a2 += (L * L * pbz + 2.0 * L * t.dp) * mag;
        a3 += (L * L * L * pbz + 3.0 * L * L * t.dp) * mag;
        a4 += (L * L * L * L * pbz + 4.0 * L * L * L * t.dp) * mag;
      }
    }

    // cell-sup jets from the pointwise derivatives plus one mean-value step;
    // near-term abs-sums are inflated by e^{L r} <= e^{kLnear r}
    const double infl = std::exp(kLnear * r);
    const double A1 = a1 * infl + far_j1_;
    const double A2 = a2 * infl + far_j2_;
    const double A3 = a3 * infl + far_j3_;
    const double A4 = a4 * infl + far_j4_;
    const Complex f{fre, fim};
    Complex df[2] = {Complex{dfre[0], dfim[0]}, Complex{dfre[1], dfim[1]}};
    double d2f2 = d2re[0] * d2re[0] + d2im[0] * d2im[0];
    double d3f2 = d3re[0] * d3re[0] + d3im[0] * d3im[0];
    if (n_ == 2) {
      d2f2 += 2.0 * (d2re[1] * d2re[1] + d2im[1] * d2im[1]) +
              d2re[2] * d2re[2] + d2im[2] * d2im[2];
      d3f2 += 3.0 * (d3re[1] * d3re[1] + d3im[1] * d3im[1]) +
              3.0 * (d3re[2] * d3re[2] + d3im[2] * d3im[2]) +
              d3re[3] * d3re[3] + d3im[3] * d3im[3];
    }

    Complex Qv = f + w_[0];
    for (int j = 2; j <= n_; ++j) Qv += w_[j - 1] * z[j - 1];
    Complex dQ[2] = {df[0], Complex{0.0, 0.0}};
    if (n_ == 2) dQ[1] = df[1] + w_[1];
    double dq2 = 0.0;
    for (int a = 0; a < n_; ++a) dq2 += std::norm(dQ[a]);
    const double dq_norm = std::sqrt(dq2);

    const double S0 = std::abs(Qv) + r * A1 + wmax_ * (1.0 + rho_);
    const double S1 = dq_norm + r * A2 + wmax_;
    const double S2 = std::sqrt(d2f2) + r * A3;
    const double S3 = std::sqrt(d3f2) + r * A4;
    out.hess_f_local = std::min(hess_f_, assemble_hess_f(S0, S1, S2));
    out.hess_df_local = std::min(hess_df_, assemble_hess_df(S0, S1, S2, S3));

    out.abs_f = gamma * std::abs(Qv);
    out.grad_f = gamma * (dq_norm + 0.5 * znorm * std::abs(Qv));
    if (n_ == 1) return out;

    // pulled-back Levi frame at the exact ambient image
    const Point zeta = chart_.to_ambient(z);
    double nr2 = 0.0;
    for (const auto& c : zeta) nr2 += std::norm(c);
    const double nr = std::sqrt(nr2);
    Point vamb(2);
    vamb[0] = -std::conj(zeta[1]) / nr;
    vamb[1] = std::conj(zeta[0]) / nr;
    Complex vt[2];
    for (int j = 0; j < 2; ++j) {
      Complex acc{0.0, 0.0};
      for (int a = 0; a < 2; ++a) acc += std::conj(chart_.U(a, j)) * vamb[a];
      vt[j] = acc;
    }

    const double sk2 = std::sqrt(0.5 * k_);
    Complex A = dQ[0] * vt[0] + dQ[1] * vt[1] + sk2 * vt[0] * Qv;
    const double a_norm = std::abs(A);
    out.abs_df = gamma * a_norm;
    const Complex d2r0{d2re[0], d2im[0]};
    const Complex d2r1{d2re[1], d2im[1]};
    const Complex d2r2{d2re[2], d2im[2]};
    const double fro = std::sqrt(std::norm(d2r0 * vt[0] + d2r1 * vt[1]) +
                                 std::norm(d2r1 * vt[0] + d2r2 * vt[1]));
    const double tilt_pt = std::abs(vt[0]);
    const double dA =
        fro + dq_norm * kappa_v_ + sk2 * (kappa_v_ * std::abs(Qv) + tilt_pt * dq_norm);
    out.grad_df = gamma * (dA + 0.5 * znorm * a_norm);
    return out;
  }

  double hess_f() const override { return hess_f_; }
  double hess_df() const override { return hess_df_; }
  double extra_slack() const override { return tail_; }

  struct ScreenData {
    Point z;
    double gamma = 1.0;
    Complex Qv0{0.0, 0.0};
    Complex dQ0[2];
    Complex vt[2];
  };

  /// w-independent parts of the functional at z (for candidate screening).
  ScreenData screen_node(const Point& z) const {
    ScreenData nd;
    nd.z = z;
    double zn2 = 0.0;
    for (const auto& c : z) zn2 += std::norm(c);
    nd.gamma = std::exp(-0.25 * zn2);
    Complex f{0.0, 0.0};
    Complex df[2] = {Complex{0.0, 0.0}, Complex{0.0, 0.0}};
    for (const auto& t : terms_) {
      Complex lam0{t.lre[0], t.lim[0]}, lam1{t.lre[1], t.lim[1]};
      Complex e = Complex{t.cre, t.cim} + lam0 * z[0];
      if (n_ == 2) e += lam1 * z[1];
      if (e.real() < -44.0) continue;
      const Complex ex = std::exp(e);
      Complex P{t.p0re, t.p0im};
      P += Complex{t.p1re[0], t.p1im[0]} * z[0];
      if (n_ == 2) P += Complex{t.p1re[1], t.p1im[1]} * z[1];
      f += P * ex;
      df[0] += (Complex{t.p1re[0], t.p1im[0]} + lam0 * P) * ex;
      if (n_ == 2) df[1] += (Complex{t.p1re[1], t.p1im[1]} + lam1 * P) * ex;
    }
    nd.Qv0 = f;
    nd.dQ0[0] = df[0];
    nd.dQ0[1] = df[1];
    nd.vt[0] = nd.vt[1] = Complex{0.0, 0.0};
    if (n_ == 2) {
      const Point zeta = chart_.to_ambient(z);
      double nr2 = 0.0;
      for (const auto& c : zeta) nr2 += std::norm(c);
      const double nr = std::sqrt(nr2);
      Point vamb(2);
      vamb[0] = -std::conj(zeta[1]) / nr;
      vamb[1] = std::conj(zeta[0]) / nr;
      for (int j = 0; j < 2; ++j) {
        Complex acc{0.0, 0.0};
        for (int a = 0; a < 2; ++a) acc += std::conj(chart_.U(a, j)) * vamb[a];
        nd.vt[j] = acc;
      }
    }
    return nd;
  }

 private:
  static constexpr double kLnear = 3.0;
  struct FusedTerm {
    double lre[2] = {0, 0}, lim[2] = {0, 0};
    double cre = 0.0, cim = 0.0;
    double p0re = 0.0, p0im = 0.0;
    double p1re[2] = {0, 0}, p1im[2] = {0, 0};
    double L = 0.0;
    double dp = 0.0;
  };
  int n_;
  ChartFrame chart_;
  double k_;
  double rho_;
  double tail_;
  std::vector<FusedTerm> terms_;
  Complex w_[2];
  double hess_f_ = 0.0;
  double hess_df_ = 0.0;
  double kappa_v_ = 0.0;
  double tilt_max_ = 0.0;
  double sk2_ = 0.0;
  double wmax_ = 0.0;
  double far_j0_ = 0.0, far_j1_ = 0.0, far_j2_ = 0.0, far_j3_ = 0.0, far_j4_ = 0.0;
};

/// Global circle evaluator for n = 1: T = |s|_w (xi is zero-dimensional);
/// the covariant gradient norm is an exact pointwise Lipschitz bound.
class SectionCircleEvaluator : public TEvaluator {
 public:
  explicit SectionCircleEvaluator(const SectionSum& s) : s_(&s) {
    const double k = s.model().k;
    double h = 0.0;
    for (const auto& t : s.terms()) {
      const double w0 = std::abs(t.w0);
      const double j0 = w0;
      const double j1 = w0 * k * weighted_power_max(k, 1);
      const double j2 = w0 * k * k * weighted_power_max(k, 2);
      // gauged second covariant + antiholomorphic part + chord-folded weight
      // drift near the sphere
      h += j2 + k * j0 + 3.0 * k * j1;
    }
    hess_f_ = h;
  }
  TSample sample(const Point& z, double) const override {
    auto jet = s_->weighted_jet(z);
    TSample out;
    out.abs_f = jet.abs_value;
    out.grad_f = jet.grad_norm;
    return out;
  }
  double hess_f() const override { return hess_f_; }
  double hess_df() const override { return 0.0; }

 private:
  const SectionSum* s_;
  double hess_f_ = 0.0;
};

double dk_dist(const FlatModel& m, const Point& a, const Point& b) { return m.dk(a, b); }

/// adaptive near-term cut: grow until the far tail is below the budget
double pick_d_cut(const SectionSum& s, const Point& p, double rho, double budget,
                  double d_min, double* tail_out) {
  const auto& model = s.model();
  double d_cut = d_min;
  for (int attempt = 0; attempt < 12; ++attempt) {
    double tail = 0.0;
    for (std::size_t i = 0; i < s.terms().size(); ++i) {
      const double d = dk_dist(model, s.terms()[i].p, p);
      if (d <= d_cut) continue;
      tail += s.influence(i, d, rho).total();
    }
    if (tail <= budget || tail == 0.0) {
      if (tail_out) *tail_out = tail;
      return d_cut;
    }
    d_cut += 1.0;
  }
  if (tail_out) *tail_out = budget;  // unreachable in practice; report budget
  return d_cut;
}

}  // namespace

double certified_covering_radius(const std::vector<Point>& pts, const HypersurfaceModel& model,
                                 double tol, double initial_lower) {
  if (pts.empty()) throw DomainError("certified_covering_radius: empty point set");
  const double scale = model_dk_scale(model);
  NetIndex index(pts, /*cell=*/1.0, scale);

  std::unique_ptr<CellGeometry> geom;
  if (const auto* sp = std::get_if<SphereModel>(&model)) {
    if (sp->n == 1)
      geom = std::make_unique<CircleGeometry>();
    else if (sp->n == 2)
      geom = std::make_unique<HopfGeometry>();
    else
      throw DomainError("certified_covering_radius: sphere model supported for n <= 2");
  } else {
    const auto& w = std::get<WallModel>(model);
    geom = std::make_unique<WallPatchGeometry>(w.n, w.radius);
  }

  // branch-and-bound maximization of the 1-Lipschitz (in d_k) function
  // dist(zeta, pts): refine cells whose upper bound beats the best sample
  struct Item {
    Cell cell;
  };
  std::deque<Item> queue;
  const double h_root = std::holds_alternative<SphereModel>(model) &&
                                std::get<SphereModel>(model).n == 2
                            ? 0.125
                            : 0.05;
  for (auto& c : geom->root_cells(h_root)) queue.push_back({std::move(c)});
  double best_lower = initial_lower;
  double upper = initial_lower;
  long nodes = 0;
  std::vector<Item> leaves;
  while (!queue.empty()) {
    Item it = std::move(queue.front());
    queue.pop_front();
    double r = 0.0;
    auto z = geom->center(it.cell, r);
    if (!z) continue;
    ++nodes;
    const double f = index.nearest(*z);
    best_lower = std::max(best_lower, f);
    const double cell_upper = f + r * scale;
    if (cell_upper <= best_lower || r * scale <= tol || nodes > 6000000) {
      upper = std::max(upper, cell_upper);
      continue;
    }
    const int d = geom->param_dim();
    for (int mask = 0; mask < (1 << d); ++mask) {
      Cell ch;
      ch.lo.resize(d);
      ch.hi.resize(d);
      ch.depth = it.cell.depth + 1;
      for (int i = 0; i < d; ++i) {
        const double mid = 0.5 * (it.cell.lo[i] + it.cell.hi[i]);
        if (mask & (1 << i)) {
          ch.lo[i] = mid;
          ch.hi[i] = it.cell.hi[i];
        } else {
          ch.lo[i] = it.cell.lo[i];
          ch.hi[i] = mid;
        }
      }
      queue.push_back({std::move(ch)});
    }
  }
  return std::max(upper, best_lower);
}

double section_chart_transversality(const SectionSum& s, const ChartFrame& chart,
                                    const ExpAffinePoly& Q, const Point& z_chart) {
  QuotientEvaluator ev(Q, chart, s.model().k, 1.5, 0.0, 0.0);
  TSample t = ev.sample(z_chart, 0.0);
  return t.abs_f + t.abs_df;
}

TransversalityCertificate certify_section_ball(const SectionSum& s, const Point& p, double rho,
                                               double d_cut, double h_target, double threshold,
                                               long node_budget) {
  const FlatModel& model = s.model();
  ChartFrame chart = make_chart(model, p);
  double tail = 0.0;
  ExpAffinePoly Q = s.chart_quotient(chart, d_cut, rho, &tail);
  QuotientEvaluator ev(Q, chart, model.k, rho, tail, 0.0);
  GraphWallGeometry geom(model.n, rho, model.k);
  CertifyOptions opts;
  opts.h_root = rho / 2.0;
  opts.h_target = h_target;
  opts.threshold = threshold;
  opts.node_budget = node_budget;
  return certified_min(ev, geom, opts);
}

ConstructionReport donaldson_construct(const ConstructConfig& cfg_in) {
  ConstructConfig cfg = cfg_in;
  if (cfg.n < 1 || cfg.n > 2) throw DomainError("donaldson_construct: n must be 1 or 2");
  if (cfg.k <= 0.0) throw DomainError("donaldson_construct: k must be > 0");
  if (cfg.A <= 0.0) cfg.A = default_A(cfg.n);
  if (cfg.D <= 0.0) cfg.D = default_D(cfg.n);
  if (cfg.density <= 0.0) cfg.density = default_density(cfg.n);

  const FlatModel model{cfg.n, cfg.k};
  ConstructionReport rep;
  rep.n = cfg.n;
  rep.k = cfg.k;
  rep.seed = cfg.seed;
  rep.section = SectionSum(model);

  // Part I: maximal 1-separated net on the boundary
  HypersurfaceModel sphere = SphereModel{cfg.n, cfg.k};
  MetricCloud cloud(sphere, cfg.density, cfg.seed);
  Net net;
  if (cfg.force_single_point) {
    net.separation = 1.0;
    Point p(cfg.n, Complex{0.0, 0.0});
    p[0] = Complex{1.0, 0.0};
    net.indices.push_back(0);
    net.points.push_back(std::move(p));
  } else {
    net = greedy_net(cloud, 1.0);
  }
  if (net.points.empty()) throw MathFailure("donaldson_construct: empty net", "{}");
  rep.net_size = static_cast<long>(net.points.size());
  rep.covering_radius = cfg.force_single_point ? 0.0 : covering_radius(net, cloud);

  // Part II: D-separated greedy coloring
  Coloring col;
  if (cfg.force_single_point) {
    col.color = {1};
    col.num_colors = 1;
    col.separation = cfg.D;
  } else {
    col = greedy_coloring(net, cfg.D, cloud.dk_scale());
  }
  const int M = col.num_colors;
  if (M > cfg.max_colors) {
    std::ostringstream diag;
    diag << "{\"colors\": " << M << ", \"max_colors\": " << cfg.max_colors << "}";
    throw MathFailure("donaldson_construct: coloring exceeds max_colors", diag.str());
  }
  rep.colors_used = M;

  // Part III: schedule (exact recursion plus the working floor)
  rep.schedule = make_schedule(cfg.p_exp, M, cfg.A, cfg.B, cfg.D, cfg.eta_floor);
  const double Ccap = cap_constant(cfg.n);

  // patch radius: certified covering radius (the ball certificates must
  // jointly cover the boundary) plus a 2% margin
  double rho = cfg.patch_rho;
  if (rho <= 0.0) {
    if (cfg.force_single_point) {
      rho = 1.05;
      rep.cover_upper = 2.0 * std::sqrt(2.0 * cfg.k);
    } else {
      rep.cover_upper =
          certified_covering_radius(net.points, sphere, 0.02, rep.covering_radius * 0.999);
      rho = std::max(1.02 * rep.cover_upper, 0.8);
    }
  } else {
    rep.cover_upper = cfg.force_single_point
                          ? 2.0 * std::sqrt(2.0 * cfg.k)
                          : certified_covering_radius(net.points, sphere, 0.02,
                                                      rep.covering_radius * 0.999);
  }
  rep.patch_rho = rho;
  const double weight_floor = std::exp(-0.25 * rho * rho);
  const double h_screen = cfg.n == 1 ? rho / 48.0 : rho / 3.5;
  const double h_target = cfg.n == 1 ? 1e-4 : 0.02;
  const long node_budget = cfg.n == 1 ? 400000 : 120000;

  rep.points.resize(net.points.size());
  rep.per_color.resize(M);

  GraphWallGeometry geom(cfg.n, rho, cfg.k);

  // Parts IV-V: per-color rounds
  for (int j = 1; j <= M; ++j) {
    const double eta_prev = rep.schedule.eta_eff[j - 1];
    const double eta_j = rep.schedule.eta_eff[j];
    const double cap = eta_prev / (cfg.A * Ccap);
    // the weighted functional tops out at e^{-rho^2/4} |w| on a fresh ball,
    // so the accept threshold cannot exceed that reach
    const double tau = std::min(eta_j, cfg.gamma_accept * weight_floor * cap);

    ColorSummary& cs = rep.per_color[j - 1];
    cs.color = j;
    cs.eta = rep.schedule.eta[j];
    cs.eta_eff = eta_j;
    cs.tau = tau;
    cs.cap = cap;
    cs.worst_round_bound = std::numeric_limits<double>::infinity();

    std::vector<SectionTerm> staged;
    for (std::size_t i = 0; i < net.points.size(); ++i) {
      if (col.color[i] != j) continue;
      ++cs.points;
      const Point& p = net.points[i];
      ChartFrame chart = make_chart(model, p);

      double tail = 0.0;
      double d_cut = cfg.d_cut;
      if (d_cut <= 0.0) {
        const double m_est = rep.section.section_transversality(p);
        const double budget = std::max(0.05 * tau, 0.01 * m_est);
        d_cut = pick_d_cut(rep.section, p, rho, budget, cfg.n == 1 ? 10.0 : 6.0, nullptr);
      }
      ExpAffinePoly Q = rep.section.chart_quotient(chart, d_cut, rho, &tail);

      QuotientEvaluator ev(Q, chart, cfg.k, rho, tail, cap);

      // screening nodes (w-independent functional data)
      std::vector<QuotientEvaluator::ScreenData> nodes;
      for (const auto& cell : geom.root_cells(h_screen)) {
        double r = 0.0;
        auto z = geom.center(cell, r);
        if (!z) continue;
        nodes.push_back(ev.screen_node(*z));
      }
      const double sk2 = std::sqrt(0.5 * cfg.k);
      auto screen = [&](std::span<const Complex> w) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& nd : nodes) {
          Complex Qv = nd.Qv0 + w[0];
          for (int a = 2; a <= cfg.n; ++a) Qv += w[a - 1] * nd.z[a - 1];
          double t = std::abs(Qv);
          if (cfg.n == 2) {
            Complex A = nd.dQ0[0] * nd.vt[0] + (nd.dQ0[1] + w[1]) * nd.vt[1] +
                        sk2 * nd.vt[0] * Qv;
            t += std::abs(A);
          }
          t *= nd.gamma;
          if (t < best) best = t;
        }
        return best - tail;
      };

      CertifyOptions copts;
      copts.h_root = rho / 2.0;
      copts.h_target = h_target;
      copts.threshold = tau;
      copts.node_budget = node_budget;
      auto certify = [&](std::span<const Complex> w) {
        ev.set_w(w);
        return certified_min(ev, geom, copts);
      };

      CandidateSearch scfg;
      scfg.n = cfg.n;
      scfg.eta = tau;
      scfg.ramp_base = tau;
      scfg.ramp_max = cap;
      scfg.budget = cfg.candidate_budget;
      scfg.seed = Rng::mix(cfg.seed ^ (0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i)));

      CandidateSearchResult res = search_candidates(scfg, screen, certify);
      if (!res.found) {
        long done = 0;
        for (const auto& q : rep.points)
          if (q.color > 0) ++done;
        std::ostringstream diag;
        diag << "{\"color\": " << j << ", \"net_index\": " << net.indices[i]
             << ", \"tau\": " << tau << ", \"tried\": " << res.tried
             << ", \"points_done\": " << done
             << ", \"best_bound\": " << res.best_bound << "}";
        throw MathFailure("donaldson_construct: per-point perturbation failed", diag.str());
      }

      PointRecord& pr = rep.points[i];
      pr.net_index = net.indices[i];
      pr.color = j;
      pr.w = res.w;
      pr.tau = tau;
      pr.cap = cap;
      pr.round_bound = res.cert.bound;
      pr.candidates = res.tried;
      pr.quotient_sup = Q.coefficient_sup_bound(rho);
      pr.tail_slack = tail;
      cs.worst_round_bound = std::min(cs.worst_round_bound, pr.round_bound);

      SectionTerm term;
      term.p = p;
      term.U = chart.U;
      term.w0 = res.w[0];
      term.wr.assign(res.w.begin() + 1, res.w.end());
      staged.push_back(std::move(term));
    }
    for (auto& t : staged) rep.section.add_term(std::move(t));
  }

  // Part V bookkeeping (diagnostic): later/simultaneous influence on each
  // certified ball, with the worst-case closed-form term bounds
  {
    std::vector<std::size_t> term_of_point(net.points.size());
    std::vector<std::size_t> order;
    for (int j = 1; j <= M; ++j)
      for (std::size_t i = 0; i < net.points.size(); ++i)
        if (col.color[i] == j) order.push_back(i);
    for (std::size_t t = 0; t < order.size(); ++t) term_of_point[order[t]] = t;

    for (std::size_t i = 0; i < net.points.size(); ++i) {
      double degrade = 0.0;
      for (std::size_t ii = 0; ii < net.points.size(); ++ii) {
        if (ii == i) continue;
        if (col.color[ii] < col.color[i]) continue;  // already in the quotient
        const double d = model.dk(net.points[i], net.points[ii]);
        if (d > 16.0) continue;
        degrade += rep.section.influence(term_of_point[ii], d, rho).total();
      }
      rep.points[i].degradation = degrade;
      rep.points[i].bookkeeping_bound = rep.points[i].round_bound - degrade;
    }
    rep.bookkeeping_bound = std::numeric_limits<double>::infinity();
    for (const auto& pr : rep.points)
      rep.bookkeeping_bound = std::min(rep.bookkeeping_bound, pr.bookkeeping_bound);
  }

  // final pass: direct certificate of every ball against the finished
  // section; the patch union covers the boundary (certified cover radius),
  // so the minimum over balls is a global lower bound
  {
    double m_hat = std::numeric_limits<double>::infinity();
    if (cfg.n == 1) {
      const long m = std::max<long>(1024, cfg.sphere_samples / 8);
      for (long i = 0; i < m; ++i) {
        const double th = 6.283185307179586477 * (i + 0.5) / m;
        Point dir{Complex{std::cos(th), std::sin(th)}};
        m_hat = std::min(m_hat, rep.section.section_transversality(dir));
      }
    } else {
      MetricCloud dirs(sphere, 1.0, 0x5a17);
      const long stride =
          std::max<long>(1, dirs.size() / std::max<long>(cfg.sphere_samples, 1));
      for (long i = 0; i < dirs.size(); i += stride)
        m_hat = std::min(m_hat, rep.section.section_transversality(dirs.point(i)));
    }
    if (!std::isfinite(m_hat)) m_hat = 0.0;
    const double theta = std::max(0.0, cfg.final_threshold_frac * m_hat);

    for (std::size_t i = 0; i < net.points.size(); ++i) {
      if (rep.points[i].bookkeeping_bound > theta) {
        // the round certificate minus the closed-form influence already
        // clears the final threshold
        rep.points[i].final_bound = rep.points[i].bookkeeping_bound;
        continue;
      }
      double tail = 0.0;
      const double tail_budget = 0.05 * std::max(theta, 1e-8);
      double d_cut = pick_d_cut(rep.section, net.points[i], rho, tail_budget,
                                cfg.n == 1 ? 10.0 : 7.0, &tail);
      TransversalityCertificate cert = certify_section_ball(
          rep.section, net.points[i], rho, d_cut, h_target, theta, node_budget);
      rep.points[i].final_bound = cert.bound;
    }
    // refine the worst balls further
    std::vector<std::size_t> idx(net.points.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return rep.points[a].final_bound < rep.points[b].final_bound;
    });
    const int extra = std::min<std::size_t>(cfg.spot_checks, idx.size());
    for (int c = 0; c < extra; ++c) {
      std::size_t i = idx[c];
      double d_cut = pick_d_cut(rep.section, net.points[i], rho,
                                0.01 * std::max(theta, 1e-8), cfg.n == 1 ? 11.0 : 8.0, nullptr);
      TransversalityCertificate cert =
          certify_section_ball(rep.section, net.points[i], rho, d_cut, h_target / 4.0,
                               std::numeric_limits<double>::infinity(), node_budget * 2);
      rep.points[i].final_bound = std::max(rep.points[i].final_bound, cert.bound);
    }
    rep.final_pass_bound = std::numeric_limits<double>::infinity();
    for (const auto& pr : rep.points)
      rep.final_pass_bound = std::min(rep.final_pass_bound, pr.final_bound);
  }

  // wall-vs-sphere diagnostic on a sample ball: compare the functional on
  // the pulled-back hypersurface with the flat-wall evaluation
  {
    const Point& p = net.points[0];
    ChartFrame chart = make_chart(model, p);
    double tail = 0.0;
    ExpAffinePoly Q = rep.section.chart_quotient(
        chart, cfg.n == 1 ? 10.0 : 6.0, rho, &tail);
    QuotientEvaluator evg(Q, chart, cfg.k, rho, 0.0, 0.0);
    FuncEvaluator evw(Q, WallModel{cfg.n, rho}, rho);
    WallPatchGeometry wall(cfg.n, rho);
    double worst = 0.0;
    for (const auto& cell : wall.root_cells(rho / 6.0)) {
      double r = 0.0;
      auto zw = wall.center(cell, r);
      if (!zw) continue;
      double rg = 0.0;
      Cell gcell = cell;
      auto zg = geom.center(gcell, rg);
      if (!zg) continue;
      TSample a = evg.sample(*zg, 0.0);
      TSample b = evw.sample(*zw, 0.0);
      const double Ta = a.abs_f + evg.deriv_scale() * a.abs_df;
      const double Tb = b.abs_f + b.abs_df;
      worst = std::max(worst, std::abs(Ta - Tb));
    }
    rep.wall_vs_sphere = worst;
    double tau_min = std::numeric_limits<double>::infinity();
    for (const auto& cs : rep.per_color) tau_min = std::min(tau_min, cs.tau);
    rep.wall_slack_within_tenth = worst <= 0.1 * tau_min;
  }

  // global verification and normalization
  GlobalVerification gv = verify_global(model, rep.section, cfg.sphere_samples);
  rep.direct_bound = gv.cert.bound;
  rep.measured_min = gv.min_measured;
  rep.sup_measured = gv.sup;
  // the final-pass ball minimum is a global bound whenever the patches
  // cover; the circle certificate gives a second route for n = 1
  double global = rep.final_pass_bound;
  if (cfg.force_single_point && cfg.n == 1) global = rep.direct_bound;
  if (cfg.n == 1) global = std::max(global, rep.direct_bound);
  rep.global_bound = global;

  // abort gate against the exact schedule tail
  const double eta_M_exact = rep.schedule.eta[M];
  if (!(rep.global_bound > 0.9 * eta_M_exact)) {
    std::ostringstream diag;
    diag << "{\"global_bound\": " << rep.global_bound << ", \"eta_M\": " << eta_M_exact
         << ", \"bookkeeping\": " << rep.bookkeeping_bound << "}";
    throw MathFailure("donaldson_construct: global certificate below 0.9 eta_M", diag.str());
  }

  // certified (crude) sup upper bound: sum of per-term global maxima
  {
    double ub = 0.0;
    const double m1 = weighted_power_max(2.0, 1);  // max t e^{-t^2/4} over t = d_k
    for (const auto& t : rep.section.terms()) {
      double wr = 0.0;
      for (const auto& w : t.wr) wr += std::norm(w);
      ub += std::abs(t.w0) + std::sqrt(wr) * m1;
    }
    rep.sup_certified_upper = ub;
  }

  rep.normalization = gv.sup > 0.0 ? gv.sup : 1.0;
  rep.section.scale(1.0 / rep.normalization);
  rep.global_bound /= rep.normalization;
  rep.direct_bound /= rep.normalization;
  rep.bookkeeping_bound /= rep.normalization;
  rep.final_pass_bound /= rep.normalization;
  rep.measured_min /= rep.normalization;
  rep.sup_certified_upper /= rep.normalization;
  {
    GlobalVerification gv2 =
        verify_global(model, rep.section, cfg.sphere_samples, 2e-3, /*with_certificate=*/false);
    rep.sup_after_normalization = gv2.sup;
  }

  rep.completed = true;
  return rep;
}

GlobalVerification verify_global(const FlatModel& model, const SectionSum& s,
                                 long sphere_samples, double h_circle, bool with_certificate) {
  GlobalVerification out;
  const double k = model.k;

  // sup of |s|_w over {phi <= 1} = B(sqrt 2): radial shells x boundary
  // directions, concentrated near the unit sphere where the sections peak
  std::vector<double> radii;
  for (int i = 0; i <= 48; ++i) radii.push_back(std::sqrt(2.0) * i / 48.0);
  const double w = 5.0 / std::sqrt(std::max(k, 1.0));
  for (int i = 0; i <= 32; ++i)
    radii.push_back(std::max(0.0, std::min(std::sqrt(2.0), 1.0 - w + 2.0 * w * i / 32.0)));

  double sup = 0.0;
  double min_measured = std::numeric_limits<double>::infinity();

  if (model.n == 1) {
    const long m = std::max<long>(1024, sphere_samples / 8);
    for (long i = 0; i < m; ++i) {
      const double th = 6.283185307179586477 * (i + 0.5) / m;
      Point dir{Complex{std::cos(th), std::sin(th)}};
      min_measured = std::min(min_measured, s.section_transversality(dir));
      for (double r : radii) {
        Point z{dir[0] * r};
        sup = std::max(sup, s.weighted_jet(z).abs_value);
      }
    }
    if (with_certificate) {
      SectionCircleEvaluator ev(s);
      CircleGeometry geom;
      CertifyOptions opts;
      opts.h_root = 0.25 / std::sqrt(2.0 * k);
      opts.h_target = h_circle / std::sqrt(2.0 * k);
      opts.threshold = std::numeric_limits<double>::infinity();
      opts.node_budget = 3000000;
      out.cert = certified_min(ev, geom, opts);
    }
  } else {
    HypersurfaceModel sphere = SphereModel{model.n, model.k};
    MetricCloud dirs(sphere, 1.0, 0x5a17);
    const long m = std::min<long>(sphere_samples, dirs.size());
    const long stride = std::max<long>(1, dirs.size() / std::max<long>(m, 1));
    const long sup_stride = std::max<long>(stride, dirs.size() / 4000);
    for (long i = 0; i < dirs.size(); i += stride) {
      Point dir = dirs.point(i);
      min_measured = std::min(min_measured, s.section_transversality(dir));
    }
    for (long i = 0; i < dirs.size(); i += sup_stride) {
      Point dir = dirs.point(i);
      for (double r : radii) {
        Point z = dir;
        for (auto& c : z) c *= r;
        sup = std::max(sup, s.weighted_jet(z).abs_value);
      }
    }
    out.cert.resolution_insufficient = true;  // certified route: per-ball charts
  }

  out.sup = sup;
  out.min_measured = min_measured;
  return out;
}

}  // namespace qtrans
