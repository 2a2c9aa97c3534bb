#include "qtrans/lef_moves.hpp"

#include <algorithm>

namespace qtrans {

LefschetzWord make_lefschetz_word(int rank, const std::vector<std::vector<int>>& cycles) {
  LefschetzWord w;
  w.rank = rank;
  w.cycles.reserve(cycles.size());
  for (const auto& c : cycles) w.cycles.emplace_back(rank, c);
  return w;
}

LefschetzWord hurwitz_left(const LefschetzWord& w, int i) {
  const int m = static_cast<int>(w.cycles.size());
  if (i < 1 || i >= m) throw DomainError("hurwitz_left: index out of range");
  LefschetzWord out = w;
  const FreeWord a = w.cycles[i - 1];
  const FreeWord b = w.cycles[i];
  out.cycles[i - 1] = b;
  out.cycles[i] = a.conjugated_by(b);  // b^{-1} a b
  return out;
}

LefschetzWord hurwitz_right(const LefschetzWord& w, int i) {
  const int m = static_cast<int>(w.cycles.size());
  if (i < 1 || i >= m) throw DomainError("hurwitz_right: index out of range");
  LefschetzWord out = w;
  const FreeWord a = w.cycles[i - 1];
  const FreeWord b = w.cycles[i];
  out.cycles[i - 1] = b.conjugated_by(a.inverse());  // a b a^{-1}
  out.cycles[i] = a;
  return out;
}

LefschetzWord cyclic_permute(const LefschetzWord& w) {
  if (w.cycles.empty()) throw DomainError("cyclic_permute: empty word");
  LefschetzWord out = w;
  std::rotate(out.cycles.begin(), out.cycles.begin() + 1, out.cycles.end());
  return out;
}

LefschetzWord cyclic_permute_inverse(const LefschetzWord& w) {
  if (w.cycles.empty()) throw DomainError("cyclic_permute_inverse: empty word");
  LefschetzWord out = w;
  std::rotate(out.cycles.begin(), out.cycles.end() - 1, out.cycles.end());
  return out;
}

LefschetzWord stabilize(const LefschetzWord& w, const FreeWord& new_cycle) {
  if (new_cycle.rank() != w.rank + 1)
    throw DomainError("stabilize: new cycle must live over rank r+1");
  if (!new_cycle.contains_generator(w.rank + 1))
    throw DomainError("stabilize: new cycle must use the fresh generator");
  LefschetzWord out;
  out.rank = w.rank + 1;
  out.cycles.reserve(w.cycles.size() + 1);
  out.cycles.push_back(new_cycle);
  for (const auto& c : w.cycles) out.cycles.push_back(c.promoted(out.rank));
  return out;
}

LefschetzWord destabilize(const LefschetzWord& w) {
  if (w.rank < 2 || w.cycles.empty()) throw DomainError("destabilize: nothing to remove");
  const int g = w.rank;
  if (!w.cycles.front().contains_generator(g))
    throw DomainError("destabilize: leading cycle does not use the top generator");
  for (std::size_t i = 1; i < w.cycles.size(); ++i)
    if (w.cycles[i].contains_generator(g))
      throw DomainError("destabilize: top generator appears beyond the leading cycle");
  LefschetzWord out;
  out.rank = w.rank - 1;
  for (std::size_t i = 1; i < w.cycles.size(); ++i) {
    FreeWord c(out.rank, w.cycles[i].letters());
    out.cycles.push_back(std::move(c));
  }
  return out;
}

Monodromy total_monodromy(const LefschetzWord& w) {
  FreeWord prod(w.rank);
  for (const auto& c : w.cycles) prod = prod * c;
  Monodromy out{prod, prod.cyclic_class_representative()};
  return out;
}

}  // namespace qtrans
