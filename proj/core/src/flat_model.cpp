#include "qtrans/flat_model.hpp"

#include <cmath>

namespace qtrans {

namespace {

Complex hermitian_pairing(const Point& a, const Point& b) {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

double norm2(const Point& z) {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return s;
}

}  // namespace

Point ChartFrame::to_ambient(const Point& z) const {
  const int n = static_cast<int>(p.size());
  Point out(n);
  for (int a = 0; a < n; ++a) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < n; ++j) acc += U(a, j) * z[j];
    out[a] = p[a] + chart_scale * acc;
  }
  return out;
}

Point ChartFrame::to_chart(const Point& zeta) const {
  const int n = static_cast<int>(p.size());
  Point out(n);
  for (int j = 0; j < n; ++j) {
    Complex acc{0.0, 0.0};
    for (int a = 0; a < n; ++a) acc += std::conj(U(a, j)) * (zeta[a] - p[a]);
    out[j] = acc / chart_scale;
  }
  return out;
}

ChartFrame make_chart(const FlatModel& model, const Point& p) {
  const int n = model.n;
  if (static_cast<int>(p.size()) != n) throw DomainError("make_chart: point dimension mismatch");
  if (std::abs(std::sqrt(norm2(p)) - 1.0) > 1e-9)
    throw DomainError("make_chart: chart center must lie on the unit sphere");

  ChartFrame chart;
  chart.p = p;
  chart.chart_scale = 1.0 / std::sqrt(2.0 * model.k);
  chart.U = Eigen::MatrixXcd::Zero(n, n);

  // column 1 is p; complete with standard basis vectors (dropping the index
  // most parallel to p, lowest index on ties) and Gram-Schmidt in order
  int drop = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i)
    if (std::abs(p[i]) > best + 1e-15) {
      best = std::abs(p[i]);
      drop = i;
    }
  std::vector<Point> cols;
  cols.push_back(p);
  for (int i = 0; i < n; ++i)
    if (i != drop) {
      Point e(n, Complex{0.0, 0.0});
      e[i] = Complex{1.0, 0.0};
      cols.push_back(std::move(e));
    }
  std::vector<Point> ortho;
  for (auto& c : cols) {
    Point v = c;
    for (const auto& u : ortho) {
      Complex proj = hermitian_pairing(v, u);
      for (int i = 0; i < n; ++i) v[i] -= proj * u[i];
    }
    double nr = std::sqrt(norm2(v));
    if (nr < 1e-12) throw DomainError("make_chart: degenerate basis completion");
    for (auto& x : v) x /= nr;
    ortho.push_back(std::move(v));
  }
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < n; ++a) chart.U(a, j) = ortho[j][a];
  return chart;
}

PeakEval peak_section_eval(const FlatModel& model, const PeakSection& sec,
                           const ChartFrame& chart, const Point& z) {
  const double k = model.k;
  // u_p(z) = 2 <z, p> - |p|^2 - 1, holomorphic in z
  const Complex u = 2.0 * hermitian_pairing(z, sec.p) - Complex{norm2(sec.p) + 1.0, 0.0};
  Complex logv = 0.5 * k * u;
  double poly_mod = 1.0;
  double poly_arg = 0.0;
  if (sec.kind >= 2) {
    // chart coordinate z_r = sqrt(2k) (U^* (z - p))_r
    const int n = model.n;
    Complex zr{0.0, 0.0};
    for (int a = 0; a < n; ++a)
      zr += std::conj(chart.U(a, sec.kind - 1)) * (z[a] - sec.p[a]);
    zr *= std::sqrt(2.0 * k);
    poly_mod = std::abs(zr);
    poly_arg = std::arg(zr);
  }
  PeakEval out;
  out.log_modulus = logv.real() + (poly_mod > 0.0 ? std::log(poly_mod)
                                                  : -std::numeric_limits<double>::infinity());
  out.arg = logv.imag() + poly_arg;
  double d2 = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) d2 += std::norm(z[i] - sec.p[i]);
  out.weighted_modulus = poly_mod * std::exp(-0.5 * k * d2);
  return out;
}

void SectionSum::scale(double c) {
  for (auto& t : terms_) {
    t.w0 *= c;
    for (auto& w : t.wr) w *= c;
  }
}

SectionSum::WeightedJet SectionSum::weighted_jet(const Point& zeta) const {
  const int n = model_.n;
  const double k = model_.k;
  WeightedJet out;
  std::vector<Complex> V(n, Complex{0.0, 0.0});
  Complex sw{0.0, 0.0};

  for (const auto& t : terms_) {
    // q = zeta - p; gamma = e^{-k|q|^2/2}; theta = k Im<zeta, p>
    Point q(n);
    double q2 = 0.0;
    for (int a = 0; a < n; ++a) {
      q[a] = zeta[a] - t.p[a];
      q2 += std::norm(q[a]);
    }
    if (0.5 * k * q2 > 45.0) continue;  // gamma below 3e-20: negligible
    const double gamma = std::exp(-0.5 * k * q2);
    const double theta = k * hermitian_pairing(zeta, t.p).imag();
    const Complex phase{std::cos(theta), std::sin(theta)};

    // P = w0 + sum_r w_r sqrt(2k) (U^* q)_r ; dP_a = sqrt(2k) sum_r w_r conj(U_{a r})
    Complex P = t.w0;
    std::vector<Complex> dP(n, Complex{0.0, 0.0});
    const double s2k = std::sqrt(2.0 * k);
    for (std::size_t ri = 0; ri < t.wr.size(); ++ri) {
      const int col = 1 + static_cast<int>(ri);  // chart coordinate r = 2..n
      Complex uq{0.0, 0.0};
      for (int a = 0; a < n; ++a) uq += std::conj(t.U(a, col)) * q[a];
      P += t.wr[ri] * s2k * uq;
      for (int a = 0; a < n; ++a) dP[a] += t.wr[ri] * s2k * std::conj(t.U(a, col));
    }

    const Complex wgt = phase * gamma;
    sw += P * wgt;
    for (int a = 0; a < n; ++a) V[a] += (dP[a] - k * P * std::conj(q[a])) * wgt;
  }

  out.value = sw;
  out.abs_value = std::abs(sw);
  double g2 = 0.0;
  for (const auto& c : V) g2 += std::norm(c);
  out.grad_norm = std::sqrt(g2);

  // Levi restriction: xi(zeta) = zeta-perp; the covector V splits off its
  // value on the unit normal zeta/|zeta|
  const double zn2 = norm2(zeta);
  if (n >= 2 && zn2 > 0.0) {
    Complex along{0.0, 0.0};
    for (int a = 0; a < n; ++a) along += V[a] * zeta[a];
    double levi2 = g2 - std::norm(along) / zn2;
    out.levi_norm = std::sqrt(std::max(0.0, levi2));
  }
  return out;
}

double SectionSum::section_transversality(const Point& zeta) const {
  WeightedJet j = weighted_jet(zeta);
  return j.abs_value + j.levi_norm / std::sqrt(2.0 * model_.k);
}

ExpAffinePoly term_in_chart(const FlatModel& model, const SectionTerm& term,
                            const ChartFrame& chart) {
  const int n = model.n;
  const double k = model.k;
  const double s2k = std::sqrt(2.0 * k);

  // exponent: (k/2)(u_{p'} - u_p)(Psi(z)) = lambda . z + c with
  // lambda_j = sqrt(k/2) conj((U^*(p'-p))_j), Re c = -d_k^2/4
  Point diff(n);
  for (int a = 0; a < n; ++a) diff[a] = term.p[a] - chart.p[a];
  std::vector<Complex> lambda(n);
  for (int j = 0; j < n; ++j) {
    Complex acc{0.0, 0.0};
    for (int a = 0; a < n; ++a) acc += std::conj(chart.U(a, j)) * diff[a];
    lambda[j] = std::sqrt(0.5 * k) * std::conj(acc);
  }
  const Complex c =
      0.5 * k *
      (2.0 * hermitian_pairing(chart.p, term.p) -
       Complex{norm2(term.p), 0.0} - 2.0 * hermitian_pairing(chart.p, chart.p) +
       Complex{norm2(chart.p), 0.0});
  // (k/2)[2<p,p'-p> - |p'|^2 + |p|^2]; the pairing expansion above keeps the
  // imaginary part of <p, p'> intact

  // polynomial part: w0 + sum_r w_r [ sqrt(2k)(U'^*(p-p'))_r + (U'^*U z)_r ]
  HoloPoly poly = HoloPoly::constant(n, term.w0);
  for (std::size_t ri = 0; ri < term.wr.size(); ++ri) {
    if (term.wr[ri] == Complex{0.0, 0.0}) continue;
    const int col = 1 + static_cast<int>(ri);
    Complex base{0.0, 0.0};
    for (int a = 0; a < n; ++a) base += std::conj(term.U(a, col)) * (chart.p[a] - term.p[a]);
    base *= s2k;
    poly.add_coefficient(MultiIndex(n), term.wr[ri] * base);
    for (int j = 0; j < n; ++j) {
      Complex m{0.0, 0.0};
      for (int a = 0; a < n; ++a) m += std::conj(term.U(a, col)) * chart.U(a, j);
      if (m == Complex{0.0, 0.0}) continue;
      MultiIndex mi(n);
      mi.e[j] = 1;
      poly.add_coefficient(mi, term.wr[ri] * m);
    }
  }

  ExpAffinePoly out(n);
  if (!poly.is_zero()) {
    ExpAffineTerm t;
    t.p = std::move(poly);
    t.lambda = std::move(lambda);
    t.c = c;
    out.add_term(std::move(t));
  }
  return out;
}

TermInfluence SectionSum::influence(std::size_t i, double d, double rho) const {
  const SectionTerm& t = terms_[i];
  double wr = 0.0;
  for (const auto& w : t.wr) wr += std::norm(w);
  wr = std::sqrt(wr);
  const double w0 = std::abs(t.w0);

  // section-side closed forms on the patch (d_k distance to the term center
  // lies in [d - rho, d + rho]): weighted value |P| e^{-d_k^2/4} and the
  // (2k)^{-1/2}-scaled covariant gradient (wr + (d_k/2)|P|) e^{-d_k^2/4}
  const double env = std::exp(-0.25 * std::max(0.0, d - rho) * std::max(0.0, d - rho));
  const double pbound = w0 + wr * (d + rho);
  TermInfluence out;
  out.value = pbound * env;
  out.gradient = (wr + pbound * 0.5 * (d + rho)) * env;
  return out;
}

ExpAffinePoly SectionSum::chart_quotient(const ChartFrame& chart, double d_cut, double rho,
                                         double* tail_c1) const {
  ExpAffinePoly Q(model_.n);
  double tail = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const double d = model_.dk(terms_[i].p, chart.p);
    if (d <= d_cut) {
      Q = Q + term_in_chart(model_, terms_[i], chart);
    } else {
      // the chart functional equals the section transversality exactly and
      // is subadditive over the near/far split, so the far contribution is
      // bounded by the section-side value + gradient influence
      TermInfluence inf = influence(i, d, rho);
      tail += inf.total();
    }
  }
  if (tail_c1) *tail_c1 = tail;
  return Q;
}

}  // namespace qtrans
