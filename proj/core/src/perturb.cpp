#include "qtrans/perturb.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qtrans/rng.hpp"

namespace qtrans {

namespace {

/// Evaluator for f_w over the wall: reuses the symbolic derivative family of
/// f (the affine perturbation only shifts the value and first derivatives).
class WallShiftEvaluator : public TEvaluator {
 public:
  WallShiftEvaluator(const ExpAffinePoly& f, double patch_reach)
      : n_(f.dim()), f_(f) {
    for (int j = 1; j <= n_; ++j) d1_.push_back(f_.wirtinger_derivative(j));
    d2_.resize(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 1; j <= n_; ++j) d2_[i].push_back(d1_[i].wirtinger_derivative(j));
    hess_f_ = f_.coefficient_jet_bound(2, patch_reach);
    hess_df_ = f_.coefficient_jet_bound(3, patch_reach);
  }

  void set_w(std::span<const Complex> w) {
    w_.assign(w.begin(), w.end());
    if (static_cast<int>(w_.size()) != n_)
      throw DomainError("WallShiftEvaluator: w has wrong number of components");
  }

  TSample sample(const Point& z, double) const override {
    TSample s;
    Complex fv = f_.evaluate(z) + w_[0];
    for (int j = 2; j <= n_; ++j) fv += w_[j - 1] * z[j - 1];
    s.abs_f = std::abs(fv);

    double g2 = 0.0, v2 = 0.0;
    for (int i = 0; i < n_; ++i) {
      Complex gi = d1_[i].evaluate(z);
      if (i >= 1) gi += w_[i];
      g2 += std::norm(gi);
      if (i >= 1) v2 += std::norm(gi);
    }
    s.grad_f = std::sqrt(g2);
    s.abs_df = std::sqrt(v2);

    double fro = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 1; j < n_; ++j) fro += std::norm(d2_[i][j].evaluate(z));
    s.grad_df = std::sqrt(fro);
    return s;
  }

  double hess_f() const override { return hess_f_; }
  double hess_df() const override { return hess_df_; }

 private:
  int n_;
  ExpAffinePoly f_;
  std::vector<ExpAffinePoly> d1_;
  std::vector<std::vector<ExpAffinePoly>> d2_;
  std::vector<Complex> w_;
  double hess_f_ = 0.0;
  double hess_df_ = 0.0;
};

}  // namespace

CandidateSearchResult search_candidates(
    const CandidateSearch& cfg,
    const std::function<double(std::span<const Complex>)>& screen_min,
    const std::function<TransversalityCertificate(std::span<const Complex>)>& certify) {
  CandidateSearchResult out;
  for (long t = 0; t < cfg.budget; ++t) {
    const double delta = std::min(cfg.ramp_base * (1.0 + t / 10.0), cfg.ramp_max);
    Rng rng(cfg.seed, static_cast<std::uint64_t>(t) + 1);
    std::vector<Complex> w = rng.uniform_complex_ball(cfg.n, delta);
    ++out.tried;

    const double screened = screen_min(w);
    if (screened > out.best_screen) out.best_screen = screened;
    if (screened <= cfg.eta) {
      if (static_cast<int>(out.rejections.size()) < cfg.max_rejection_records)
        out.rejections.push_back({t, delta, screened, false, 0.0});
      continue;
    }

    TransversalityCertificate cert = certify(w);
    if (cert.bound > cfg.eta) {
      out.found = true;
      out.w = std::move(w);
      out.cert = cert;
      out.accepted_index = t;
      return out;
    }
    if (cert.bound > out.best_bound) {
      out.best_bound = cert.bound;
      out.best_w = w;
    }
    if (static_cast<int>(out.rejections.size()) < cfg.max_rejection_records)
      out.rejections.push_back({t, delta, screened, true, cert.bound});
  }
  return out;
}

PerturbationCertificate find_perturbation(const PerturbationProblem& prob) {
  const int n = prob.f.dim();
  if (!(prob.eta > 0.0 && prob.eta < 1.0 / 3.0))
    throw DomainError("find_perturbation: eta must lie in (0, 1/3)");
  if (prob.p_exp < 1.0) throw DomainError("find_perturbation: p_exp must be >= 1");
  if (prob.eps <= 0.0) throw DomainError("find_perturbation: eps must be > 0");

  const double outer = prob.wall_radius * (1.0 + prob.eps);
  const SupEstimate sup = measured_sup_bound(prob.f, outer, prob.sup_resolution);
  if (!prob.allow_large_sup && sup.bound > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "find_perturbation: |f| <= 1 precondition fails on B(" << outer
       << ") (measured bound " << sup.bound << ")";
    throw DomainError(os.str());
  }

  // Taylor cross-check data: F~ of degree m with certified tail <= eta.
  FMap F = f_to_F(prob.f);
  int m = static_cast<int>(std::ceil(prob.taylor_C * std::abs(std::log(prob.eta))));
  double comp_sup = 0.0;
  for (const auto& c : F.components)
    comp_sup = std::max(comp_sup, c.coefficient_sup_bound(outer));
  std::vector<HoloPoly> Ftilde;
  double tail = 0.0;
  for (int attempt = 0;; ++attempt) {
    Ftilde.clear();
    tail = 0.0;
    for (const auto& c : F.components) {
      auto [t, tl] = truncate_with_tail_bound(c, m, comp_sup, prob.eps);
      Ftilde.push_back(std::move(t));
      tail = std::max(tail, tl);
    }
    if (tail <= prob.eta || m >= 400) break;
    m += 8;
  }
  if (tail > prob.eta) {
    std::ostringstream diag;
    diag << "{\"taylor_tail\": " << tail << ", \"degree\": " << m << "}";
    throw MathFailure("find_perturbation: certified Taylor tail cannot reach eta", diag.str());
  }

  // screening grid over the wall patch
  WallPatchGeometry wall(n, prob.wall_radius);
  struct Node {
    Point z;
    Complex fv;
    std::vector<Complex> dv;  // d_j f, j = 2..n
  };
  std::vector<Node> nodes;
  {
    std::vector<ExpAffinePoly> d1;
    for (int j = 2; j <= n; ++j) d1.push_back(prob.f.wirtinger_derivative(j));
    for (const auto& cell : wall.root_cells(prob.screen_h)) {
      double r = 0.0;
      auto z = wall.center(cell, r);
      if (!z) continue;
      Node nd;
      nd.z = *z;
      nd.fv = prob.f.evaluate(*z);
      for (auto& dj : d1) nd.dv.push_back(dj.evaluate(*z));
      nodes.push_back(std::move(nd));
    }
  }

  auto screen = [&](std::span<const Complex> w) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& nd : nodes) {
      Complex fv = nd.fv + w[0];
      double v2 = 0.0;
      for (int j = 2; j <= n; ++j) {
        fv += w[j - 1] * nd.z[j - 1];
        v2 += std::norm(nd.dv[j - 2] + w[j - 1]);
      }
      const double t = std::abs(fv) + std::sqrt(v2);
      if (t < best) best = t;
    }
    return best;
  };

  WallShiftEvaluator ev(prob.f, prob.wall_radius);
  HypersurfaceModel model = WallModel{n, prob.wall_radius};
  WallPatchGeometry geom(n, prob.wall_radius);
  CertifyOptions copts = prob.certify;
  copts.threshold = prob.eta;
  auto certify = [&](std::span<const Complex> w) {
    ev.set_w(w);
    return certified_min(ev, geom, copts);
  };

  const double allowed = prob.eta * std::pow(std::abs(std::log(prob.eta)), prob.p_exp);
  CandidateSearch cfg;
  cfg.n = n;
  cfg.eta = prob.eta;
  cfg.ramp_base = prob.eta;
  cfg.ramp_max = prob.radius_cap > 0.0 ? std::min(allowed, prob.radius_cap) : allowed;
  cfg.budget = prob.budget;
  cfg.seed = prob.seed;
  cfg.max_rejection_records = prob.max_rejection_records;

  CandidateSearchResult res = search_candidates(cfg, screen, certify);

  if (!res.found) {
    std::ostringstream diag;
    diag << "{\"tried\": " << res.tried << ", \"best_bound\": " << res.best_bound
         << ", \"best_screen\": " << res.best_screen << "}";
    throw MathFailure("find_perturbation: candidate budget exhausted", diag.str());
  }

  PerturbationCertificate out;
  out.w = res.w;
  double wn = 0.0;
  for (const auto& c : out.w) wn += std::norm(c);
  out.w_norm = std::sqrt(wn);
  out.allowed_radius = allowed;
  out.eta = prob.eta;
  out.p_exp = prob.p_exp;
  out.cert = res.cert;
  out.candidates_tried = res.tried;
  out.accepted_index = res.accepted_index;
  out.sup_bound_measured = sup.bound;
  out.taylor_tail = tail;
  out.taylor_degree = m;
  out.rejections = std::move(res.rejections);

  // F-distance cross-check on the screen nodes (diagnostic, not the gate)
  double fd = std::numeric_limits<double>::infinity();
  for (const auto& nd : nodes) {
    double d2 = 0.0;
    for (std::size_t c = 0; c < Ftilde.size(); ++c)
      d2 += std::norm(out.w[c] - Ftilde[c].evaluate(nd.z));
    fd = std::min(fd, d2);
  }
  out.fdist_min_grid = std::sqrt(fd);
  return out;
}

}  // namespace qtrans
