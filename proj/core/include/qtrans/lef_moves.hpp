#pragma once

#include "qtrans/lef_word.hpp"

namespace qtrans {

/// Abstract vanishing-cycle data: an ordered tuple of free words over a
/// common rank. The Dehn twist acts by conjugation, tau_b(a) = b^{-1} a b,
/// the unique monoid action preserving the ordered product under the left
/// Hurwitz move.
struct LefschetzWord {
  int rank = 1;
  std::vector<FreeWord> cycles;

  std::size_t size() const { return cycles.size(); }
};

LefschetzWord make_lefschetz_word(int rank, const std::vector<std::vector<int>>& cycles);

/// (..., a, b, ...) -> (..., b, b^{-1} a b, ...), 1-based position i < m.
LefschetzWord hurwitz_left(const LefschetzWord& w, int i);
/// (..., a, b, ...) -> (..., a b a^{-1}, a, ...).
LefschetzWord hurwitz_right(const LefschetzWord& w, int i);
/// (L1, ..., Lm) -> (L2, ..., Lm, L1).
LefschetzWord cyclic_permute(const LefschetzWord& w);
LefschetzWord cyclic_permute_inverse(const LefschetzWord& w);
/// Rank grows by one; the new cycle (which must use generator rank+1) is
/// prepended.
LefschetzWord stabilize(const LefschetzWord& w, const FreeWord& new_cycle);
/// Inverse of stabilize: removes the leading cycle, which must be the only
/// one using the top generator.
LefschetzWord destabilize(const LefschetzWord& w);

struct Monodromy {
  FreeWord product;
  FreeWord class_representative;
};

/// Ordered product of the cycles with its cyclically-reduced,
/// lexicographically-least conjugacy representative.
Monodromy total_monodromy(const LefschetzWord& w);

}  // namespace qtrans
