#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "qtrans/exp_affine.hpp"
#include "qtrans/hypersurface.hpp"

namespace qtrans {

/// Pointwise transversality functional
///   T(f, z) = |f(z)| + deriv_scale * sqrt(sum_v |d_v f(z)|^2)
/// over the frame vectors v. deriv_scale carries the d_k bookkeeping: 1 in
/// chart (wall) coordinates, 1/sqrt(2k) for the sphere models.
double transversality_at(const ExpAffinePoly& f, const Point& z, const LeviFrame& frame,
                         double deriv_scale = 1.0);
double transversality_at(const HoloPoly& f, const Point& z, const LeviFrame& frame,
                         double deriv_scale = 1.0);

/// Point sample of the two components of T plus their local gradient sizes
/// (used for the per-cell first-order certification slack).
struct TSample {
  double abs_f = 0.0;    // |f(z)|
  double abs_df = 0.0;   // |df(z) restricted to the frame|
  double grad_f = 0.0;   // local Lipschitz data for |f|
  double grad_df = 0.0;  // local Lipschitz data for |df restricted|
  // cell-local second-order bounds; negative means "use the global ones"
  double hess_f_local = -1.0;
  double hess_df_local = -1.0;
};

/// Evaluation bundle consumed by certified_min. Implementations supply point
/// samples, global second-order (Hessian-level) bounds valid on the whole
/// patch, the derivative scale, and any extra uniform slack (pruned-tail
/// bounds and the like).
class TEvaluator {
 public:
  virtual ~TEvaluator() = default;
  /// Point sample; cell_radius lets implementations report tighter
  /// cell-local second-order bounds.
  virtual TSample sample(const Point& z, double cell_radius) const = 0;
  virtual double hess_f() const = 0;
  virtual double hess_df() const = 0;
  virtual double deriv_scale() const { return 1.0; }
  virtual double extra_slack() const { return 0.0; }
};

/// Parameter-space cell: a box in the domain parameterization.
struct Cell {
  std::vector<double> lo, hi;
  int depth = 0;
};

/// Maps parameter boxes to ambient sample points with a radius bound that
/// covers the box from the sample.
class CellGeometry {
 public:
  virtual ~CellGeometry() = default;
  virtual int param_dim() const = 0;
  virtual std::vector<Cell> root_cells(double h_root) const = 0;
  /// Ambient center sample; may be adjusted (e.g. clamped into the ball), in
  /// which case `radius` must still cover the whole box from the returned
  /// point. Returns nullopt when the box misses the domain entirely.
  virtual std::optional<Point> center(const Cell& c, double& radius) const = 0;
};

/// Wall patch {|z| <= radius, Re z1 = 0} parameterized by the 2n-1 real wall
/// coordinates (Im z1, Re z2, Im z2, ...).
class WallPatchGeometry : public CellGeometry {
 public:
  WallPatchGeometry(int n, double radius);
  int param_dim() const override { return 2 * n_ - 1; }
  std::vector<Cell> root_cells(double h_root) const override;
  std::optional<Point> center(const Cell& c, double& radius) const override;

 private:
  int n_;
  double radius_;
};

/// Unit circle (sphere model, n = 1), parameterized by angle.
class CircleGeometry : public CellGeometry {
 public:
  int param_dim() const override { return 1; }
  std::vector<Cell> root_cells(double h_root) const override;
  std::optional<Point> center(const Cell& c, double& radius) const override;
};

/// S^3 in Hopf coordinates (t, alpha, beta) -> (sqrt(1-t) e^{2pi i alpha},
/// sqrt(t) e^{2pi i beta}); uniform in the parameters is uniform on S^3, and
/// boxes have closed-form chordal diameter bounds, so the lattice refines.
class HopfGeometry : public CellGeometry {
 public:
  int param_dim() const override { return 3; }
  std::vector<Cell> root_cells(double h_root) const override;
  std::optional<Point> center(const Cell& c, double& radius) const override;
};

struct CertifyOptions {
  double h_root = 0.5;       // coarsest cell size (parameter units)
  double h_target = 0.01;    // refine until cells reach this size
  double threshold = 0.0;    // stop refining cells certified above this
  long node_budget = 2'000'000;
  int max_depth = 24;
};

/// Certified lower bound for min T over a patch.
///
/// grid_min / witness: smallest sampled value and where (ties broken by the
/// deterministic traversal order). bound: certified lower bound for the true
/// minimum, never above grid_min. Bounds inherit from parent cells, so
/// refining the target step can only improve the result.
struct TransversalityCertificate {
  double h = 0.0;        // base grid step (parameter units)
  double h_finest = 0.0; // finest cell refined to
  double grid_min = 0.0;
  double slack = 0.0;    // grid_min - bound
  double bound = 0.0;
  Point witness;
  long nodes = 0;
  bool certified_above_threshold = false;
  bool resolution_insufficient = false;  // bound <= 0 while samples are positive
};

TransversalityCertificate certified_min(const TEvaluator& ev, const CellGeometry& geom,
                                        const CertifyOptions& opts);

/// Spec-level wrapper for plain functions on a model hypersurface: builds the
/// symbolic-derivative evaluator, runs the branch-and-bound, reports. The
/// sup bound on the enlarged domain backs the Cauchy-route slack constants
/// recorded alongside the coefficient-route bounds.
TransversalityCertificate certified_min(const ExpAffinePoly& f, const HypersurfaceModel& model,
                                        double h, double sup_bound_enlarged,
                                        double enlargement = 0.25,
                                        const CertifyOptions* opts_override = nullptr);

/// Function evaluator over a wall or sphere patch (symbolic derivatives of an
/// ExpAffinePoly; frame handling per model).
class FuncEvaluator : public TEvaluator {
 public:
  FuncEvaluator(const ExpAffinePoly& f, const HypersurfaceModel& model, double patch_reach);
  TSample sample(const Point& z, double cell_radius) const override;
  double hess_f() const override { return hess_f_; }
  double hess_df() const override { return hess_df_; }
  double deriv_scale() const override { return deriv_scale_; }

 private:
  int n_;
  HypersurfaceModel model_;
  ExpAffinePoly f_;
  std::vector<ExpAffinePoly> d1_;                // d_i f
  std::vector<std::vector<ExpAffinePoly>> d2_;   // d_i d_j f
  double hess_f_ = 0.0;
  double hess_df_ = 0.0;
  double deriv_scale_ = 1.0;
};

}  // namespace qtrans
