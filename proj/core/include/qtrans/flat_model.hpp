#pragma once

#include <Eigen/Dense>

#include "qtrans/exp_affine.hpp"
#include "qtrans/hypersurface.hpp"

namespace qtrans {

/// Flat model: potential phi(z) = |z|^2 - 1 on C^n, metric g = 2 eucl,
/// boundary hypersurface {|z| = 1}, rescaled metric d_k = sqrt(2k) |z - w|.
struct FlatModel {
  int n = 1;
  double k = 1.0;

  double phi(const Point& z) const {
    double s = 0.0;
    for (const auto& c : z) s += std::norm(c);
    return s - 1.0;
  }
  double dk(const Point& a, const Point& b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(2.0 * k * s);
  }
};

/// Unitary chart at a boundary point p: Psi(z) = p + s U z with
/// s = (2k)^{-1/2} and U e1 = p, so Psi pulls g_k back to the Euclidean
/// metric exactly and the outward normal becomes the e1 axis.
struct ChartFrame {
  Point p;
  Eigen::MatrixXcd U;
  double chart_scale = 1.0;  // (2k)^{-1/2}

  Point to_ambient(const Point& z) const;
  Point to_chart(const Point& zeta) const;
};

ChartFrame make_chart(const FlatModel& model, const Point& p);

/// Peak section data: base kind evaluates (in the L^k norm) to exactly
/// e^{-k|z-p|^2/2} = e^{-d_k^2/4}; linear kinds carry the chart coordinate
/// z_r of the rescaled chart.
struct PeakSection {
  Point p;
  int kind = 0;  // 0 = base, r in 2..n = linear(r)
};

struct PeakEval {
  double log_modulus = 0.0;  // log of the trivialized modulus
  double arg = 0.0;
  double weighted_modulus = 0.0;
};

/// Evaluates the trivialized value in log-modulus/argument form (overflow
/// guard) together with the L^k-weighted modulus.
PeakEval peak_section_eval(const FlatModel& model, const PeakSection& sec,
                           const ChartFrame& chart, const Point& z);

/// One constructed summand s_i = (w_0 + sum_r w_r z_r(chart)) * sigma_{p_i}.
struct SectionTerm {
  Point p;
  Eigen::MatrixXcd U;
  Complex w0{0.0, 0.0};
  std::vector<Complex> wr;  // w_2..w_n (chart Levi coordinates)
};

/// Closed-form C^0/C^1 bound for the influence of one section term on the
/// chart patch of radius rho around another boundary point at d_k distance
/// d: value part and weighted-gradient part of the transversality
/// functional.
struct TermInfluence {
  double value = 0.0;
  double gradient = 0.0;
  double total() const { return value + gradient; }
};

/// The holomorphic section sum s = sum_i s_i with its ambient weighted jets
/// and chart-quotient extraction.
class SectionSum {
 public:
  explicit SectionSum(const FlatModel& model) : model_(model) {}

  const FlatModel& model() const { return model_; }
  const std::vector<SectionTerm>& terms() const { return terms_; }
  void add_term(SectionTerm t) { terms_.push_back(std::move(t)); }
  void scale(double c);

  /// Weighted jets at an ambient point: s_w = s e^{-k phi/2} as a complex
  /// number, the covariant gradient V_a = (d_a s - k s conj(zeta_a))
  /// weighted, and the Levi-restricted covariant norm.
  struct WeightedJet {
    Complex value{0.0, 0.0};   // s e^{-k phi / 2}
    double abs_value = 0.0;
    double grad_norm = 0.0;    // |V|_w, Euclidean over all coordinates
    double levi_norm = 0.0;    // |V restricted to zeta-perp|_w, Euclidean
  };
  WeightedJet weighted_jet(const Point& zeta) const;

  /// Transversality of the section at a boundary point:
  /// |s|_w + (2k)^{-1/2} |V restricted to xi|_w.
  double section_transversality(const Point& zeta) const;

  /// Chart quotient (s / sigma_p) o Psi as an ExpAffinePoly over the chart
  /// ball of radius rho: terms within d_k distance d_cut enter exactly; the
  /// C^1 influence of the rest is returned as a certified tail bound.
  ExpAffinePoly chart_quotient(const ChartFrame& chart, double d_cut, double rho,
                               double* tail_c1) const;

  /// C^0/C^1 influence bound of term i on the patch of radius rho around
  /// boundary point q at d_k distance d = d_k(q, p_i).
  TermInfluence influence(std::size_t i, double d, double rho) const;

 private:
  FlatModel model_;
  std::vector<SectionTerm> terms_;
};

/// Builds the exact chart ExpAffinePoly of a single term relative to the
/// chart at p: (w_0 + sum_r w_r l_r(z)) e^{lambda.z + c} with
/// |lambda| = d_k/2 and Re c = -d_k^2/4.
ExpAffinePoly term_in_chart(const FlatModel& model, const SectionTerm& term,
                            const ChartFrame& chart);

}  // namespace qtrans
