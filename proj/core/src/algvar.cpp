#include "qtrans/algvar.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "qtrans/rng.hpp"

namespace qtrans {

RealPoly::RealPoly(int n) : n_(n) {
  if (n < 1) throw DomainError("RealPoly: dimension must be >= 1");
}

RealPoly RealPoly::constant(int n, double c) {
  RealPoly p(n);
  p.add_coefficient(MultiIndex(n), c);
  return p;
}

RealPoly RealPoly::coordinate(int n, int j) {
  if (j < 1 || j > n) throw DomainError("RealPoly::coordinate: axis out of range");
  RealPoly p(n);
  MultiIndex a(n);
  a.e[j - 1] = 1;
  p.add_coefficient(a, 1.0);
  return p;
}

int RealPoly::degree() const {
  int d = 0;
  if (coef_.empty()) return -1;
  for (const auto& [a, c] : coef_) d = std::max(d, a.total_degree());
  return d;
}

void RealPoly::add_coefficient(const MultiIndex& a, double c) {
  if (a.dim() != n_) throw DomainError("RealPoly::add_coefficient: index dimension mismatch");
  double& v = coef_[a];
  v += c;
  if (v == 0.0) coef_.erase(a);
}

double RealPoly::evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw DomainError("RealPoly::evaluate: point dimension mismatch");
  double acc = 0.0;
  for (const auto& [a, c] : coef_) {
    double t = c;
    for (int i = 0; i < n_; ++i)
      for (std::uint32_t k = 0; k < a.e[i]; ++k) t *= x[i];
    acc += t;
  }
  return acc;
}

RealPoly RealPoly::derivative(int j) const {
  if (j < 1 || j > n_) throw DomainError("RealPoly::derivative: axis out of range");
  RealPoly d(n_);
  for (const auto& [a, c] : coef_) {
    if (a.e[j - 1] == 0) continue;
    MultiIndex b = a;
    b.e[j - 1] -= 1;
    d.add_coefficient(b, c * a.e[j - 1]);
  }
  return d;
}

RealPoly RealPoly::operator+(const RealPoly& o) const {
  if (o.n_ != n_) throw DomainError("RealPoly::operator+: dimension mismatch");
  RealPoly r = *this;
  for (const auto& [a, c] : o.coef_) r.add_coefficient(a, c);
  return r;
}

RealPoly RealPoly::operator*(const RealPoly& o) const {
  if (o.n_ != n_) throw DomainError("RealPoly::operator*: dimension mismatch");
  RealPoly r(n_);
  for (const auto& [a, ca] : coef_)
    for (const auto& [b, cb] : o.coef_) r.add_coefficient(a.plus(b), ca * cb);
  return r;
}

RealPoly RealPoly::scaled(double c) const {
  RealPoly r(n_);
  if (c == 0.0) return r;
  for (const auto& [a, ca] : coef_) r.add_coefficient(a, ca * c);
  return r;
}

double RealPoly::coefficient_norm() const {
  double s = 0.0;
  for (const auto& [a, c] : coef_) s += c * c;
  return std::sqrt(s);
}

void RealPoly::prune() {
  for (auto it = coef_.begin(); it != coef_.end();)
    it = (it->second == 0.0) ? coef_.erase(it) : std::next(it);
}

// ---------------------------------------------------------------------------

namespace {

double log_binom(double a, double b) {
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

void enumerate_indices(int n, int max_deg, std::vector<MultiIndex>& out) {
  MultiIndex a(n);
  auto rec = [&](auto&& self, int coord, int used) -> void {
    if (coord == n) {
      out.push_back(a);
      return;
    }
    for (int k = 0; used + k <= max_deg; ++k) {
      a.e[coord] = static_cast<std::uint32_t>(k);
      self(self, coord + 1, used + k);
    }
    a.e[coord] = 0;
  };
  rec(rec, 0, 0);
}

}  // namespace

int auroux_degree_bound(int n, int m, int d) {
  if (!(n < m)) throw DomainError("auroux_degree_bound: requires n < m");
  if (d < 1) throw DomainError("auroux_degree_bound: requires d >= 1");
  double ratio = 1.0;
  for (int i = n + 1; i <= m; ++i) ratio *= i;  // m!/n!
  ratio *= std::pow(static_cast<double>(d), n);
  int D = static_cast<int>(std::ceil(std::pow(ratio, 1.0 / (m - n)) - 1e-12));
  auto power_ok = [&](int Dc) { return std::pow(static_cast<double>(Dc), m - n) >= ratio - 1e-9; };
  while (!power_ok(D)) ++D;
  while (D > 1 && power_ok(D - 1)) --D;

  // pigeonhole dimension count from the containment proof
  const double lhs = log_binom(m + D, m);
  const double rhs = log_binom(n + static_cast<double>(d) * D, n);
  if (!(lhs > rhs)) {
    std::ostringstream diag;
    diag << "{\"D\": " << D << ", \"log_dim_G\": " << lhs << ", \"log_dim_comp\": " << rhs << "}";
    throw MathFailure("auroux_degree_bound: dimension count failed", diag.str());
  }
  return D;
}

std::uint64_t milnor_bound(int n, int d) {
  if (n < 1 || d < 1) throw DomainError("milnor_bound: requires n >= 1 and d >= 1");
  const double check = d * std::pow(2.0 * d - 1.0, n - 1);
  if (check > 9.2e18) throw DomainError("milnor_bound: result exceeds 64-bit range");
  std::uint64_t r = static_cast<std::uint64_t>(d);
  for (int i = 1; i < n; ++i) r *= static_cast<std::uint64_t>(2 * d - 1);
  return r;
}

ContainmentWitness containment_hypersurface(const std::vector<RealPoly>& F, int D,
                                            double null_tol) {
  if (F.empty()) throw DomainError("containment_hypersurface: empty map");
  const int n = F[0].dim();
  const int m = static_cast<int>(F.size());
  for (const auto& f : F)
    if (f.dim() != n) throw DomainError("containment_hypersurface: mixed dimensions");
  int d = 1;
  for (const auto& f : F) d = std::max(d, f.degree());

  ContainmentWitness out;
  out.degree_bound = D;
  {
    const double lhs = log_binom(m + D, m);
    const double rhs = log_binom(n + static_cast<double>(d) * D, n);
    out.dimension_count_ok = lhs > rhs;
  }

  // composition power cache: F_i^k for k = 0..D
  std::vector<std::vector<RealPoly>> powers(m);
  for (int i = 0; i < m; ++i) {
    powers[i].push_back(RealPoly::constant(n, 1.0));
    for (int k = 1; k <= D; ++k) powers[i].push_back(powers[i][k - 1] * F[i]);
  }

  std::vector<MultiIndex> gmons;
  enumerate_indices(m, D, gmons);
  std::vector<MultiIndex> compmons;
  enumerate_indices(n, d * D, compmons);
  std::map<MultiIndex, int> comp_row;
  for (std::size_t r = 0; r < compmons.size(); ++r) comp_row[compmons[r]] = static_cast<int>(r);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<long>(compmons.size()),
                                            static_cast<long>(gmons.size()));
  for (std::size_t col = 0; col < gmons.size(); ++col) {
    RealPoly comp = RealPoly::constant(n, 1.0);
    for (int i = 0; i < m; ++i)
      if (gmons[col].e[i]) comp = comp * powers[i][gmons[col].e[i]];
    for (const auto& [a, c] : comp.terms()) A(comp_row.at(a), static_cast<long>(col)) = c;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  out.smallest_singular = smin;

  const long null_col = static_cast<long>(gmons.size()) - 1;
  Eigen::VectorXd v = svd.matrixV().col(null_col);
  const bool has_extra_cols = gmons.size() > compmons.size();
  if (!has_extra_cols && smax > 0.0 && smin / smax > null_tol) {
    std::ostringstream diag;
    diag << "{\"smallest_singular\": " << smin << ", \"largest_singular\": " << smax << "}";
    throw MathFailure("containment_hypersurface: numerical null space empty at tolerance",
                      diag.str());
  }

  RealPoly G(m);
  for (std::size_t col = 0; col < gmons.size(); ++col)
    if (v(static_cast<long>(col)) != 0.0) G.add_coefficient(gmons[col], v(static_cast<long>(col)));
  const double cn = G.coefficient_norm();
  if (cn == 0.0)
    throw MathFailure("containment_hypersurface: null vector vanished",
                      "{\"smallest_singular\": 0}");
  G = G.scaled(1.0 / cn);

  // validation residual on a deterministic low-discrepancy parameter set
  Rng rng(0xA11CEULL, 7);
  double res = 0.0;
  std::vector<double> t(n), y(m);
  for (int s = 0; s < 256; ++s) {
    for (int i = 0; i < n; ++i) t[i] = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < m; ++i) y[i] = F[i].evaluate(t);
    res = std::max(res, std::abs(G.evaluate(y)));
  }
  out.residual = res;
  out.G = std::move(G);
  return out;
}

TubeEstimate tube_volume(const VarietySpec& X, double eps, long samples, std::uint64_t seed) {
  if (eps <= 0.0) throw DomainError("tube_volume: eps must be > 0");
  if (samples < 1) throw DomainError("tube_volume: need at least one sample");
  const int n = X.n;
  for (const auto& g : X.polys)
    if (g.dim() != n) throw DomainError("tube_volume: polynomial dimension mismatch");

  std::vector<std::vector<RealPoly>> grads;
  double coef_scale = 1.0;
  for (const auto& g : X.polys) {
    std::vector<RealPoly> gg;
    for (int j = 1; j <= n; ++j) gg.push_back(g.derivative(j));
    grads.push_back(std::move(gg));
    coef_scale = std::max(coef_scale, g.coefficient_norm());
  }
  const double res_tol = 1e-10 * coef_scale;

  auto h_val = [&](const std::vector<double>& x) {
    double h = 0.0;
    for (const auto& g : X.polys) {
      const double v = g.evaluate(x);
      h += 0.5 * v * v;
    }
    return h;
  };
  auto residual = [&](const std::vector<double>& x) {
    double r = 0.0;
    for (const auto& g : X.polys) r = std::max(r, std::abs(g.evaluate(x)));
    return r;
  };

  TubeEstimate out;
  out.eps = eps;
  out.samples = samples;

  std::vector<double> p(n), x(n), trial(n), grad(n);
  for (long s = 0; s < samples; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s) + 1);
    for (int i = 0; i < n; ++i) p[i] = rng.uniform();
    x = p;

    bool on_variety = residual(x) <= res_tol;
    for (int it = 0; it < 50 && !on_variety; ++it) {
      double h = h_val(x);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t gi = 0; gi < X.polys.size(); ++gi) {
        const double v = X.polys[gi].evaluate(x);
        for (int i = 0; i < n; ++i) grad[i] += v * grads[gi][i].evaluate(x);
      }
      double g2 = 0.0;
      for (double v : grad) g2 += v * v;
      if (g2 == 0.0) break;  // stationary; cannot make progress
      double alpha = 1.0;
      bool stepped = false;
      for (int half = 0; half < 40; ++half) {
        for (int i = 0; i < n; ++i) trial[i] = x[i] - alpha * grad[i];
        if (h_val(trial) <= h - 1e-4 * alpha * g2) {
          x = trial;
          stepped = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!stepped) break;
      on_variety = residual(x) <= res_tol;
    }

    if (on_variety) {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) d2 += (x[i] - p[i]) * (x[i] - p[i]);
      if (d2 <= eps * eps) ++out.hits;
    } else {
      ++out.descent_failures;
    }
  }

  out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
  const double phat = out.estimate;
  out.ci_halfwidth = 2.5758293035489004 * std::sqrt(phat * (1.0 - phat) / samples);
  return out;
}

}  // namespace qtrans
