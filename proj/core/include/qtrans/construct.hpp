#pragma once

#include "qtrans/flat_model.hpp"
#include "qtrans/nets.hpp"
#include "qtrans/perturb.hpp"
#include "qtrans/schedule.hpp"

namespace qtrans {

/// Amplitude-cap constant: with |w| <= eta/(A * cap_constant(n)) the stored
/// summand obeys |s_i|_w <= (eta/A) e^{-d_k^2/9} pointwise. For n >= 2 the
/// linear sections contribute the factor max_t sqrt(1+t^2) e^{-5 t^2/36}
/// (attained at t^2 = 13/5); for n = 1 only the base section appears.
double cap_constant(int n);

struct ConstructConfig {
  int n = 1;
  double k = 100.0;
  double p_exp = 3.0;
  double A = 0.0;          // 0 => default per n
  double B = 10.0;
  double D = 0.0;          // coloring separation; 0 => default per n
  double eta_floor = 1e-3; // working-schedule floor (0 = exact recursion)
  double gamma_accept = 0.99;
  double density = 0.0;    // boundary cloud density; 0 => default per n
  long candidate_budget = 4000;
  double patch_rho = 0.0;  // certification patch radius; 0 => certified
                           // covering radius plus margin
  double d_cut = 0.0;      // near-term cut; 0 => adaptive from the tail budget
  std::uint64_t seed = 0;
  bool force_single_point = false;
  int spot_checks = 8;     // extra fine re-certifications of the worst balls
  long sphere_samples = 100000;
  int max_colors = 1024;
  double final_threshold_frac = 0.7;  // final-pass early-stop threshold as a
                                      // fraction of the measured boundary min
};

struct PointRecord {
  long net_index = 0;
  int color = 0;
  std::vector<Complex> w;
  double tau = 0.0;
  double cap = 0.0;
  double round_bound = 0.0;   // certified weighted transversality over the ball
  double degradation = 0.0;   // later/simultaneous influence bound (worst case)
  double bookkeeping_bound = 0.0;  // round_bound - degradation (diagnostic)
  double final_bound = 0.0;        // direct certificate against the final s
  long candidates = 0;
  double quotient_sup = 0.0;
  double tail_slack = 0.0;
};

struct ColorSummary {
  int color = 0;
  double eta = 0.0;
  double eta_eff = 0.0;
  double tau = 0.0;
  double cap = 0.0;
  double worst_round_bound = 0.0;
  int points = 0;
};

struct ConstructionReport {
  int n = 1;
  double k = 0.0;
  std::uint64_t seed = 0;
  Schedule schedule;
  long net_size = 0;
  int colors_used = 0;
  double covering_radius = 0.0;
  std::vector<PointRecord> points;
  std::vector<ColorSummary> per_color;

  double patch_rho = 0.0;          // certification patch radius used
  double cover_upper = 0.0;        // certified upper bound on the covering radius
  double bookkeeping_bound = 0.0;  // min over balls of (round cert - influence), diagnostic
  double final_pass_bound = 0.0;   // min over balls of the final direct certificates
  double direct_bound = 0.0;       // direct circle certificate (n = 1)
  double global_bound = 0.0;       // reported certified transversality
  double measured_min = 0.0;       // sphere sampling of |s|_w + (2k)^{-1/2}|ds|_xi
  double sup_measured = 0.0;       // max |s|_w over {phi <= 1} before normalization
  double sup_after_normalization = 0.0;
  double sup_certified_upper = 0.0;
  double normalization = 1.0;
  double wall_vs_sphere = 0.0;     // measured wall-vs-graph functional discrepancy
  bool wall_slack_within_tenth = false;
  bool completed = false;

  SectionSum section{FlatModel{}};
};

/// The full construction: net -> coloring -> per-color perturbation rounds ->
/// influence bookkeeping -> global verification -> normalization.
ConstructionReport donaldson_construct(const ConstructConfig& cfg);

struct GlobalVerification {
  double sup = 0.0;
  double min_measured = 0.0;
  TransversalityCertificate cert;  // circle certificate for n = 1
};

/// sup of |s|_w over {phi <= 1} (dense deterministic sampling) and the
/// boundary transversality: a certified circle minimum for n = 1, measured
/// sphere sampling for n = 2 (certified bounds for n = 2 come from the
/// per-ball chart certificates of the construction).
GlobalVerification verify_global(const FlatModel& model, const SectionSum& s,
                                 long sphere_samples = 100000, double h_circle = 1e-3,
                                 bool with_certificate = true);

/// Per-ball certified transversality of a section over the chart patch at
/// boundary point p (pulled-back true hypersurface, exact reference-section
/// quotient). Used by the construction rounds and by direct re-checks.
TransversalityCertificate certify_section_ball(const SectionSum& s, const Point& p,
                                               double rho, double d_cut, double h_target,
                                               double threshold, long node_budget = 400000);

/// Certified upper bound for the covering radius of a point set on the model
/// boundary: branch-and-bound maximization of the nearest-point distance
/// (Lipschitz constant 1 in d_k).
double certified_covering_radius(const std::vector<Point>& pts, const HypersurfaceModel& model,
                                 double tol = 0.02, double initial_lower = 0.0);

/// Chart-side transversality functional gamma(z)(|Q| + |dQ + Q dlog sigma
/// restricted to the pulled-back frame|) at a chart point of the graph; by
/// construction it equals the ambient section transversality at Psi(z).
double section_chart_transversality(const SectionSum& s, const ChartFrame& chart,
                                    const ExpAffinePoly& Q, const Point& z_chart);

}  // namespace qtrans
