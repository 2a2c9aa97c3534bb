#include "qtrans/fmap.hpp"

namespace qtrans {

FMap f_to_F(const ExpAffinePoly& f) {
  const int n = f.dim();
  FMap F;
  F.n = n;
  F.components.reserve(n);

  ExpAffinePoly f0 = f.scaled(Complex{-1.0, 0.0});
  for (int j = 2; j <= n; ++j)
    f0 = f0 + f.wirtinger_derivative(j).poly_multiplied(HoloPoly::coordinate(n, j));
  F.components.push_back(std::move(f0));
  for (int j = 2; j <= n; ++j)
    F.components.push_back(f.wirtinger_derivative(j).scaled(Complex{-1.0, 0.0}));
  return F;
}

FMap f_to_F(const HoloPoly& f) { return f_to_F(ExpAffinePoly::from_poly(f)); }

std::vector<Complex> FMap::evaluate(const Point& z) const {
  std::vector<Complex> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.evaluate(z));
  return out;
}

std::vector<Complex> f_map_delta(const FMap& F, const Point& z, std::span<const Complex> w) {
  if (w.size() != F.components.size())
    throw DomainError("f_map_delta: w has wrong number of components");
  auto Fz = F.evaluate(z);
  for (std::size_t i = 0; i < Fz.size(); ++i) Fz[i] = w[i] - Fz[i];
  return Fz;
}

}  // namespace qtrans
