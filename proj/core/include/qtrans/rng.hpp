#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace qtrans {

/// Counter-based deterministic random source (splitmix64 core).
///
/// Every draw is a pure function of (seed, stream, counter), so samples can
/// be generated out of order or in parallel and still reproduce bit-exactly.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), counter_(0) {}

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t next_u64() { return at(counter_++); }

  /// Draw number `i` of this stream, independent of the internal counter.
  std::uint64_t at(std::uint64_t i) const {
    std::uint64_t h = mix(seed_ ^ 0x6a09e667f3bcc909ULL);
    h = mix(h ^ stream_);
    return mix(h ^ i);
  }

  /// Uniform in [0,1).
  double uniform() { return to_unit(next_u64()); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal (Box-Muller; consumes exactly two draws, no rejection).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 5e-324;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  std::complex<double> normal_complex() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 5e-324;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586477 * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  /// Uniform point in the closed ball of radius `radius` in C^m
  /// (2m real dimensions). Deterministic in the stream counter.
  std::vector<std::complex<double>> uniform_complex_ball(int m, double radius) {
    std::vector<std::complex<double>> v(m);
    double norm2 = 0.0;
    for (int i = 0; i < m; ++i) {
      v[i] = normal_complex();
      norm2 += std::norm(v[i]);
    }
    double u = uniform();
    double nrm = std::sqrt(norm2);
    double scale = (nrm > 0.0) ? radius * std::pow(u, 1.0 / (2.0 * m)) / nrm : 0.0;
    for (auto& z : v) z *= scale;
    return v;
  }

  static double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
};

}  // namespace qtrans
