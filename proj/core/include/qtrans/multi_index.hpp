#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace qtrans {

/// Monomial exponent vector of a fixed ambient complex dimension.
struct MultiIndex {
  std::vector<std::uint32_t> e;

  MultiIndex() = default;
  explicit MultiIndex(int n) : e(static_cast<std::size_t>(n), 0u) {}
  MultiIndex(std::initializer_list<std::uint32_t> init) : e(init) {}

  int dim() const { return static_cast<int>(e.size()); }

  int total_degree() const {
    return std::accumulate(e.begin(), e.end(), 0u);
  }

  MultiIndex plus(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
    return r;
  }

  bool operator==(const MultiIndex& o) const { return e == o.e; }
  bool operator<(const MultiIndex& o) const { return e < o.e; }
};

}  // namespace qtrans
