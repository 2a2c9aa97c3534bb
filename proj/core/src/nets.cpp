#include "qtrans/nets.hpp"

#include <cmath>
#include <unordered_map>

#include "qtrans/rng.hpp"

namespace qtrans {

namespace {

constexpr double kTwoPi = 6.283185307179586477;
// R2 low-discrepancy increments (plastic-constant pair)
constexpr double kG1 = 0.7548776662466927;
constexpr double kG2 = 0.5698402909980532;

double frac(double x) { return x - std::floor(x); }

/// Spatial hash over points scaled to d_k units; cell size = the query
/// radius, so any point within that radius lies in an adjacent cell.
class PointHash {
 public:
  PointHash(double cell, double scale) : cell_(cell), scale_(scale) {}

  void insert(const Point& z, long) {
    pts_.push_back(z);
    map_[key(z)].push_back(pts_.size() - 1);
  }

  bool any_within(const Point& z, double dk_radius) const {
    const double r2 = dk_radius * dk_radius;
    return visit_cells(z, [&](std::size_t slot) {
      return dk2(pts_[slot], z) < r2;
    });
  }

  /// Squared d_k distance to the nearest stored point (expanding rings;
  /// infinity when empty). Cells at L_inf ring distance R only hold points
  /// at d_k distance >= (R-1) * cell, so the scan stops as soon as the best
  /// found cannot be beaten by unscanned rings.
  double nearest2(const Point& z) const {
    if (pts_.empty()) return std::numeric_limits<double>::infinity();
    const int dims = static_cast<int>(z.size()) * 2;
    std::vector<long> base = cell_coords(z);
    double best = std::numeric_limits<double>::infinity();
    std::vector<long> c(dims);
    for (int ring = 0; ring <= 1024; ++ring) {
      visit_ring(base, ring, c, [&](const std::vector<long>& cc) {
        auto it = map_.find(pack(cc));
        if (it == map_.end()) return;
        for (std::size_t slot : it->second) best = std::min(best, dk2(pts_[slot], z));
      });
      if (best <= square(ring * cell_)) return best;
    }
    return best;
  }

  double dk2(const Point& a, const Point& b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return s * scale_ * scale_;
  }

 private:
  static double square(double x) { return x * x; }

  std::vector<long> cell_coords(const Point& z) const {
    std::vector<long> c(z.size() * 2);
    for (std::size_t i = 0; i < z.size(); ++i) {
      c[2 * i] = static_cast<long>(std::floor(z[i].real() * scale_ / cell_));
      c[2 * i + 1] = static_cast<long>(std::floor(z[i].imag() * scale_ / cell_));
    }
    return c;
  }

  std::uint64_t pack(const std::vector<long>& c) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (long v : c) h = Rng::mix(h ^ static_cast<std::uint64_t>(v + (1L << 40)));
    return h;
  }

  std::uint64_t key(const Point& z) const { return pack(cell_coords(z)); }

  template <typename Fn>
  bool visit_cells(const Point& z, Fn&& within) const {
    const int dims = static_cast<int>(z.size()) * 2;
    std::vector<long> base = cell_coords(z);
    std::vector<long> c(dims);
    std::vector<int> d(dims, -1);
    while (true) {
      for (int i = 0; i < dims; ++i) c[i] = base[i] + d[i];
      auto it = map_.find(pack(c));
      if (it != map_.end())
        for (std::size_t slot : it->second)
          if (within(slot)) return true;
      int i = 0;
      for (; i < dims; ++i) {
        if (++d[i] <= 1) break;
        d[i] = -1;
      }
      if (i == dims) return false;
    }
  }

  template <typename Fn>
  void visit_ring(const std::vector<long>& base, int ring, std::vector<long>& c,
                  Fn&& fn) const {
    const int dims = static_cast<int>(base.size());
    std::vector<int> d(dims, -ring);
    if (ring == 0) {
      fn(base);
      return;
    }
    while (true) {
      bool on_ring = false;
      for (int i = 0; i < dims; ++i)
        if (std::abs(d[i]) == ring) on_ring = true;
      if (on_ring) {
        for (int i = 0; i < dims; ++i) c[i] = base[i] + d[i];
        fn(c);
      }
      int i = 0;
      for (; i < dims; ++i) {
        if (++d[i] <= ring) break;
        d[i] = -ring;
      }
      if (i == dims) break;
    }
  }

  double cell_;
  double scale_;
  std::vector<Point> pts_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> map_;
};

}  // namespace

MetricCloud::MetricCloud(const HypersurfaceModel& model, double density, std::uint64_t seed)
    : model_(model), density_(density), scale_(model_dk_scale(model)) {
  if (density <= 0.0) throw DomainError("MetricCloud: density must be > 0");
  Rng rng(seed, 0x5eed);
  if (std::holds_alternative<SphereModel>(model_)) {
    const auto& s = std::get<SphereModel>(model_);
    if (s.n == 1) {
      const double len = kTwoPi * scale_;
      size_ = static_cast<long>(std::ceil(density * len));
      off1_ = rng.uniform();
    } else if (s.n == 2) {
      const double vol = 2.0 * kTwoPi * kTwoPi / 4.0 * scale_ * scale_ * scale_;  // 2 pi^2 (2k)^{3/2}
      size_ = static_cast<long>(std::ceil(density * density * density * vol));
      off1_ = rng.uniform();
      off2_ = rng.uniform();
      off3_ = rng.uniform();
    } else {
      throw DomainError("MetricCloud: sphere model supported for n <= 2");
    }
  } else {
    const auto& w = std::get<WallModel>(model_);
    spacing_ = 1.0 / density;
    per_axis_ = 2 * static_cast<int>(std::floor(w.radius / spacing_)) + 1;
    long total = 1;
    const int d = 2 * w.n - 1;
    for (int i = 0; i < d; ++i) total *= per_axis_;
    size_ = total;
  }
}

Point MetricCloud::point(long i) const {
  if (i < 0 || i >= size_) throw DomainError("MetricCloud::point: index out of range");
  if (std::holds_alternative<SphereModel>(model_)) {
    const auto& s = std::get<SphereModel>(model_);
    if (s.n == 1) {
      const double th = kTwoPi * frac((i + 0.5) / size_ + off1_);
      return {Complex{std::cos(th), std::sin(th)}};
    }
    const double t = frac((i + 0.5) / size_ + off1_);
    const double a = kTwoPi * frac(i * kG1 + off2_);
    const double b = kTwoPi * frac(i * kG2 + off3_);
    return {std::sqrt(1.0 - t) * Complex{std::cos(a), std::sin(a)},
            std::sqrt(t) * Complex{std::cos(b), std::sin(b)}};
  }
  const auto& w = std::get<WallModel>(model_);
  const int d = 2 * w.n - 1;
  const int half = (per_axis_ - 1) / 2;
  std::vector<double> q(d);
  long rem = i;
  for (int c = 0; c < d; ++c) {
    q[c] = spacing_ * (static_cast<int>(rem % per_axis_) - half);
    rem /= per_axis_;
  }
  Point z(w.n);
  z[0] = Complex{0.0, q[0]};
  for (int j = 1; j < w.n; ++j) z[j] = Complex{q[2 * j - 1], q[2 * j]};
  return z;
}

double MetricCloud::dk_distance(const Point& a, const Point& b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return scale_ * std::sqrt(s);
}

Net greedy_net(const MetricCloud& cloud, double separation) {
  if (cloud.size() == 0) throw DomainError("greedy_net: empty cloud");
  Net net;
  net.separation = separation;
  PointHash hash(separation, cloud.dk_scale());
  for (long i = 0; i < cloud.size(); ++i) {
    Point z = cloud.point(i);
    if (hash.any_within(z, separation)) continue;
    hash.insert(z, i);
    net.indices.push_back(i);
    net.points.push_back(std::move(z));
  }
  return net;
}

Coloring greedy_coloring(const Net& net, double D, double dk_scale) {
  if (D < 1.0) throw DomainError("greedy_coloring: D must be >= 1");
  Coloring col;
  col.separation = D;
  col.color.assign(net.points.size(), 0);
  std::size_t remaining = net.points.size();
  int round = 0;
  while (remaining > 0) {
    ++round;
    PointHash hash(D, dk_scale);
    for (std::size_t i = 0; i < net.points.size(); ++i) {
      if (col.color[i] != 0) continue;
      if (hash.any_within(net.points[i], D)) continue;
      hash.insert(net.points[i], static_cast<long>(i));
      col.color[i] = round;
      --remaining;
    }
  }
  col.num_colors = round;
  return col;
}

double covering_radius(const Net& net, const MetricCloud& cloud) {
  PointHash hash(std::max(net.separation, 1e-9), cloud.dk_scale());
  for (std::size_t i = 0; i < net.points.size(); ++i)
    hash.insert(net.points[i], static_cast<long>(i));
  double worst = 0.0;
  for (long i = 0; i < cloud.size(); ++i)
    worst = std::max(worst, hash.nearest2(cloud.point(i)));
  return std::sqrt(worst);
}

bool verify_separated(const std::vector<Point>& pts, double separation, double dk_scale) {
  PointHash hash(separation, dk_scale);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (hash.any_within(pts[i], separation * (1.0 - 1e-12))) return false;
    hash.insert(pts[i], static_cast<long>(i));
  }
  return true;
}

bool verify_maximal(const Net& net, const MetricCloud& cloud) {
  PointHash hash(net.separation, cloud.dk_scale());
  for (std::size_t i = 0; i < net.points.size(); ++i)
    hash.insert(net.points[i], static_cast<long>(i));
  for (long i = 0; i < cloud.size(); ++i) {
    Point z = cloud.point(i);
    if (!hash.any_within(z, net.separation * (1.0 + 1e-12))) return false;
  }
  return true;
}

bool verify_coloring(const Net& net, const Coloring& col, double dk_scale) {
  if (col.color.size() != net.points.size()) return false;
  for (int c = 1; c <= col.num_colors; ++c) {
    std::vector<Point> cls;
    for (std::size_t i = 0; i < net.points.size(); ++i)
      if (col.color[i] == c) cls.push_back(net.points[i]);
    if (cls.empty()) return false;
    if (!verify_separated(cls, col.separation, dk_scale)) return false;
  }
  return true;
}

struct NetIndex::Impl {
  Impl(double cell, double scale) : hash(cell, scale) {}
  PointHash hash;
};

NetIndex::NetIndex(const std::vector<Point>& pts, double cell, double dk_scale)
    : impl_(new Impl(cell, dk_scale)) {
  for (std::size_t i = 0; i < pts.size(); ++i) impl_->hash.insert(pts[i], static_cast<long>(i));
}

NetIndex::~NetIndex() { delete impl_; }

double NetIndex::nearest(const Point& z) const { return std::sqrt(impl_->hash.nearest2(z)); }

bool NetIndex::any_within(const Point& z, double dk_radius) const {
  return impl_->hash.any_within(z, dk_radius);
}

}  // namespace qtrans
