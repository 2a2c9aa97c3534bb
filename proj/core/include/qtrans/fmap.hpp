#pragma once

#include "qtrans/exp_affine.hpp"

namespace qtrans {

/// The degeneracy map of the perturbation problem: for
/// f_w = f + w_0 + w_2 z_2 + ... + w_n z_n, the unique w at which
/// |f_w(z)| + |df_w(z)| restricted to the Levi distribution vanishes is
///
///   F(z) = (-f + z_2 d_2 f + ... + z_n d_n f, -d_2 f, ..., -d_n f).
///
/// Components are indexed 0, 2, ..., n (there is no w_1 slot); for n = 1 the
/// map degenerates to the single component (-f).
struct FMap {
  int n = 1;
  std::vector<ExpAffinePoly> components;  // size n: F_0, F_2, ..., F_n

  /// Evaluates (F_0(z), F_2(z), ..., F_n(z)).
  std::vector<Complex> evaluate(const Point& z) const;
};

FMap f_to_F(const ExpAffinePoly& f);
FMap f_to_F(const HoloPoly& f);

/// w - F(z) for a perturbation vector w = (w_0, w_2, ..., w_n).
std::vector<Complex> f_map_delta(const FMap& F, const Point& z, std::span<const Complex> w);

}  // namespace qtrans
