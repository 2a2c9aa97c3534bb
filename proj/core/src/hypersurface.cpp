#include "qtrans/hypersurface.hpp"

#include <cmath>

namespace qtrans {

int model_dim(const HypersurfaceModel& m) {
  return std::visit([](const auto& v) { return v.n; }, m);
}

double model_dk_scale(const HypersurfaceModel& m) {
  if (const auto* s = std::get_if<SphereModel>(&m)) return std::sqrt(2.0 * s->k);
  return 1.0;
}

namespace {

double norm2(const Point& z) {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return s;
}

}  // namespace

bool on_hypersurface(const HypersurfaceModel& m, const Point& z, double tol) {
  if (static_cast<int>(z.size()) != model_dim(m)) return false;
  if (std::holds_alternative<WallModel>(m)) {
    const auto& w = std::get<WallModel>(m);
    return std::abs(z[0].real()) <= tol && std::sqrt(norm2(z)) <= w.radius + tol;
  }
  return std::abs(std::sqrt(norm2(z)) - 1.0) <= tol;
}

LeviFrame levi_frame(const HypersurfaceModel& m, const Point& z) {
  const int n = model_dim(m);
  if (!on_hypersurface(m, z, 1e-9))
    throw DomainError("levi_frame: point off-hypersurface (tolerance 1e-9)");

  LeviFrame out;
  out.base = z;

  if (std::holds_alternative<WallModel>(m)) {
    for (int j = 2; j <= n; ++j) {
      Point v(n, Complex{0.0, 0.0});
      v[j - 1] = Complex{1.0, 0.0};
      out.frame.push_back(std::move(v));
    }
    return out;
  }

  if (n == 1) return out;  // xi is zero-dimensional on the circle

  if (n == 2) {
    // smooth explicit frame on S^3: v = (-conj(z2), conj(z1)) / |z|
    const double nrm = std::sqrt(norm2(z));
    Point v(2);
    v[0] = -std::conj(z[1]) / nrm;
    v[1] = std::conj(z[0]) / nrm;
    out.frame.push_back(std::move(v));
    return out;
  }

  // general case: Gram-Schmidt of the standard basis against the base point,
  // dropping the coordinate most parallel to it (lowest index on ties)
  int drop = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    double a = std::abs(z[i]);
    if (a > best + 1e-15) {
      best = a;
      drop = i;
    }
  }
  std::vector<Point> basis;
  basis.push_back(z);  // occupies the normal direction
  for (int i = 0; i < n; ++i)
    if (i != drop) {
      Point e(n, Complex{0.0, 0.0});
      e[i] = Complex{1.0, 0.0};
      basis.push_back(std::move(e));
    }
  std::vector<Point> ortho;
  for (const auto& b : basis) {
    Point v = b;
    for (const auto& u : ortho) {
      Complex proj{0.0, 0.0};
      for (int i = 0; i < n; ++i) proj += v[i] * std::conj(u[i]);
      for (int i = 0; i < n; ++i) v[i] -= proj * u[i];
    }
    double nrm = std::sqrt(norm2(v));
    if (nrm < 1e-12) continue;
    for (auto& c : v) c /= nrm;
    ortho.push_back(std::move(v));
  }
  // first vector spans the complex normal; the rest is the Levi frame
  out.frame.assign(ortho.begin() + 1, ortho.end());
  return out;
}

}  // namespace qtrans
