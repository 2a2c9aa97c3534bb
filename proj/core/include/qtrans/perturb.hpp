#pragma once

#include <functional>

#include "qtrans/bounds.hpp"
#include "qtrans/fmap.hpp"
#include "qtrans/transversality.hpp"

namespace qtrans {

/// Inputs of the perturbation search. The target eta must lie in (0, 1/3)
/// (the proposition's hypothesis); p_exp controls the allowed radius
/// eta |ln eta|^p_exp; eps is the margin on which f is bounded.
struct PerturbationProblem {
  ExpAffinePoly f{1};
  double eta = 0.1;
  double p_exp = 3.0;
  double eps = 0.25;
  long budget = 100000;
  std::uint64_t seed = 0;

  double wall_radius = 1.0;
  double radius_cap = 0.0;     // >0: additional cap on |w| (amplitude budgets)
  bool allow_large_sup = false;  // skip the |f|<=1 gate (callers record the sup)
  double taylor_C = 8.0;
  int sup_resolution = 0;
  int max_rejection_records = 32;

  double screen_h = 0.1;       // screening grid step (wall coordinates)
  CertifyOptions certify{0.25, 0.02, 0.0, 400000, 18};
};

struct CandidateRecord {
  long index = 0;
  double radius = 0.0;
  double screened_min = 0.0;
  bool certified_run = false;
  double bound = 0.0;
};

struct PerturbationCertificate {
  std::vector<Complex> w;   // (w_0, w_2, ..., w_n)
  double w_norm = 0.0;
  double allowed_radius = 0.0;
  double eta = 0.0;
  double p_exp = 0.0;
  TransversalityCertificate cert;
  long candidates_tried = 0;
  long accepted_index = -1;
  double sup_bound_measured = 0.0;

  // cross-check data (recorded, never the acceptance gate)
  double fdist_min_grid = 0.0;   // min over the screen grid of |w - F~(z)|
  double taylor_tail = 0.0;
  int taylor_degree = 0;

  std::vector<CandidateRecord> rejections;
};

/// Searches for w with |w| <= eta |ln eta|^p_exp making
/// f_w = f + w_0 + w_2 z_2 + ... + w_n z_n certified eta-transverse over the
/// wall {Re z1 = 0} in B(wall_radius). Draws are uniform in B(delta_t) with
/// the ramp delta_t = eta (1 + t/10) capped at the allowed radius (and at
/// radius_cap when set); the first candidate whose direct certificate
/// exceeds eta is accepted. Budget exhaustion raises MathFailure carrying
/// the best candidate and its bound.
PerturbationCertificate find_perturbation(const PerturbationProblem& prob);

/// Shared ramp/draw/accept loop for callers that supply their own screening
/// and certification (the construction pipeline certifies quotients over the
/// pulled-back hypersurface instead of the flat wall).
struct CandidateSearch {
  int n = 1;                  // complex dimension of w
  double eta = 0.1;           // acceptance threshold
  double ramp_base = 0.1;     // ramp start (usually eta)
  double ramp_max = 1.0;      // hard cap on |w|
  long budget = 100000;
  std::uint64_t seed = 0;
  int max_rejection_records = 32;
};

struct CandidateSearchResult {
  bool found = false;
  std::vector<Complex> w;
  TransversalityCertificate cert;
  long tried = 0;
  long accepted_index = -1;
  std::vector<Complex> best_w;
  double best_bound = -1.0;
  double best_screen = 0.0;
  std::vector<CandidateRecord> rejections;
};

CandidateSearchResult search_candidates(
    const CandidateSearch& cfg,
    const std::function<double(std::span<const Complex>)>& screen_min,
    const std::function<TransversalityCertificate(std::span<const Complex>)>& certify);

}  // namespace qtrans
