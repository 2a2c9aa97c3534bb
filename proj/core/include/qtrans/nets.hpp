#pragma once

#include <cstdint>

#include "qtrans/hypersurface.hpp"

namespace qtrans {

/// Deterministic index-addressable point set on a model hypersurface, with
/// the d_k metric (sqrt(2k) times ambient chordal distance on the sphere;
/// chart units on the wall). Points are computed on demand so large clouds
/// never need to be stored.
class MetricCloud {
 public:
  /// density: target points per unit d_k length (circle), per unit
  /// d_k-volume^(1/3) (S^3), or grid spacing 1/density (wall patch).
  MetricCloud(const HypersurfaceModel& model, double density, std::uint64_t seed);

  long size() const { return size_; }
  Point point(long i) const;
  double dk_scale() const { return scale_; }
  double dk_distance(const Point& a, const Point& b) const;
  const HypersurfaceModel& model() const { return model_; }
  double density() const { return density_; }

 private:
  HypersurfaceModel model_;
  double density_;
  double scale_;
  long size_ = 0;
  // circle/hopf offsets
  double off1_ = 0.0, off2_ = 0.0, off3_ = 0.0;
  // wall grid layout
  int per_axis_ = 0;
  double spacing_ = 0.0;
};

/// Maximal s-separated subset, greedy first-fit in cloud index order.
struct Net {
  std::vector<long> indices;
  std::vector<Point> points;
  double separation = 1.0;
};

Net greedy_net(const MetricCloud& cloud, double separation = 1.0);

/// Greedy coloring: repeatedly selects a maximal D-separated subset of the
/// not-yet-colored net points (index order), one color per round.
struct Coloring {
  std::vector<int> color;  // 1-based colors per net index
  int num_colors = 0;
  double separation = 0.0;
};

Coloring greedy_coloring(const Net& net, double D, double dk_scale);

/// max over cloud points of the d_k distance to the nearest net point.
double covering_radius(const Net& net, const MetricCloud& cloud);

/// Direct re-scans used by reports and tests.
bool verify_separated(const std::vector<Point>& pts, double separation, double dk_scale);
bool verify_maximal(const Net& net, const MetricCloud& cloud);
/// Every color class is itself D-separated.
bool verify_coloring(const Net& net, const Coloring& col, double dk_scale);

/// Nearest-point queries against a fixed point set (d_k units).
class NetIndex {
 public:
  NetIndex(const std::vector<Point>& pts, double cell, double dk_scale);
  ~NetIndex();
  NetIndex(const NetIndex&) = delete;
  NetIndex& operator=(const NetIndex&) = delete;
  double nearest(const Point& z) const;  // d_k distance
  bool any_within(const Point& z, double dk_radius) const;

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace qtrans
