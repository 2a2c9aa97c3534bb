#pragma once

#include <variant>

#include "qtrans/holo_poly.hpp"

namespace qtrans {

/// {z in B(radius): Re z1 = 0}. Ambient coordinates are already chart
/// coordinates, so distances are plain Euclidean.
struct WallModel {
  int n = 2;
  double radius = 1.0;
};

/// Unit sphere {|z| = 1} in the flat model, carrying the rescaled metric
/// d_k(z,w) = sqrt(2k) |z - w| (ambient chordal distance).
struct SphereModel {
  int n = 1;
  double k = 1.0;
};

using HypersurfaceModel = std::variant<WallModel, SphereModel>;

int model_dim(const HypersurfaceModel& m);
/// sqrt(2k) for the sphere, 1 for the wall: converts ambient Euclidean
/// lengths to d_k lengths.
double model_dk_scale(const HypersurfaceModel& m);

bool on_hypersurface(const HypersurfaceModel& m, const Point& z, double tol = 1e-9);

/// Orthonormal complex basis of the Levi distribution at a point of the
/// hypersurface.
struct LeviFrame {
  Point base;
  std::vector<Point> frame;
};

/// Deterministic frame: span(e2..en) on the wall; for the sphere, the
/// orthogonal complement of the base point (explicit formula for n = 2,
/// Gram-Schmidt over the standard basis otherwise, dropping the index most
/// parallel to the point, lowest index on ties). Throws DomainError when the
/// point is off the hypersurface (tolerance 1e-9).
LeviFrame levi_frame(const HypersurfaceModel& m, const Point& z);

}  // namespace qtrans
