#include "fraclab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclab/segment_hierarchy.hpp"

namespace fraclab {

namespace {

using std::numbers::pi;

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Outward unit normal of a counter-clockwise edge direction.
Point outward_normal(const Point& edge) { return Point(edge.y(), -edge.x()).normalized(); }

Box bounding_box(std::span<const Point> pts) {
  Box box{pts.front(), pts.front()};
  for (const Point& p : pts) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  return box;
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double point_set_diameter(std::span<const Point> pts) {
  const std::vector<Point> hull = convex_hull({pts.begin(), pts.end()});
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, (hull[i] - hull[j]).squaredNorm());
  return std::sqrt(best);
}

class DiskShape final : public DomainShape {
 public:
  DiskShape(Point center, double radius) : center_(std::move(center)), radius_(radius) {}

  BoundaryQuery query(const Point& x) const override {
    const double rho = (x - center_).norm();
    return {std::abs(radius_ - rho), rho < radius_};
  }
  Point boundary_point(double u) const override {
    const double theta = 2.0 * pi * u;
    return center_ + radius_ * Point(std::cos(theta), std::sin(theta));
  }
  double perimeter() const override { return 2.0 * pi * radius_; }
  std::vector<Point> boundary_samples() const override {
    std::vector<Point> pts(4096);
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = boundary_point(double(i) / double(pts.size()));
    return pts;
  }
  bool has_shell_sampler() const override { return true; }
  ShellSample inner_shell_sample(double a, double b, double u0, double u1) const override {
    b = std::min(b, radius_);
    if (b <= a) return {center_, 0.0};
    const double depth = a + u1 * (b - a);
    const double theta = 2.0 * pi * u0;
    const double rho = radius_ - depth;
    return {center_ + rho * Point(std::cos(theta), std::sin(theta)), 2.0 * pi * (b - a) * rho};
  }

 private:
  Point center_;
  double radius_;
};

class PolygonShape final : public DomainShape {
 public:
  explicit PolygonShape(std::vector<Point> ring) : ring_(std::move(ring)), tree_(ring_) {
    const std::size_t n = ring_.size();
    degenerate_ = std::abs(shoelace_area(ring_)) == 0.0;
    cumulative_.resize(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) cumulative_[i + 1] = cumulative_[i] + edge(i).norm();
    wedge_cumulative_.push_back(0.0);
    if (degenerate_) return;
    for (std::size_t i = 0; i < n; ++i) {
      const Point in = edge((i + n - 1) % n);
      const Point out = edge(i);
      const double turn = cross(in, out);
      if (turn < 0.0) {
        reflex_.push_back(static_cast<std::uint32_t>(i));
        wedge_cumulative_.push_back(wedge_cumulative_.back() + std::atan2(-turn, in.dot(out)));
      }
    }
  }

  BoundaryQuery query(const Point& x) const override {
    const NearestSegment hit = tree_.nearest(x);
    const double distance = std::sqrt(hit.distance_sq);
    if (degenerate_) return {distance, false};
    const std::size_t n = ring_.size();
    const std::size_t i = hit.segment;
    if (hit.t > 0.0 && hit.t < 1.0) return {distance, cross(edge(i), x - ring_[i]) > 0.0};
    // Foot is a vertex: classify against the bisecting pseudo-normal.
    const std::size_t v = hit.t <= 0.0 ? i : (i + 1) % n;
    const Point normal = outward_normal(edge((v + n - 1) % n)) + outward_normal(edge(v));
    return {distance, (x - ring_[v]).dot(normal) < 0.0};
  }

  Point boundary_point(double u) const override {
    const double s = std::clamp(u, 0.0, 1.0) * cumulative_.back();
    const std::size_t i = segment_at(s);
    const double len = cumulative_[i + 1] - cumulative_[i];
    return ring_[i] + (len > 0.0 ? (s - cumulative_[i]) / len : 0.0) * edge(i);
  }

  double perimeter() const override { return cumulative_.back(); }
  std::vector<Point> boundary_samples() const override { return ring_; }
  bool has_shell_sampler() const override { return !degenerate_; }

  ShellSample inner_shell_sample(double a, double b, double u0, double u1) const override {
    if (degenerate_ || b <= a) return {ring_.front(), 0.0};
    const double seg_mass = perimeter() * (b - a);
    const double half_ring = 0.5 * (b * b - a * a);
    const double total = seg_mass + wedge_cumulative_.back() * half_ring;
    const double w = u0 * total;
    Point x;
    double depth = 0.0;
    if (w < seg_mass || reflex_.empty()) {
      const double s = std::min(w / (b - a), cumulative_.back());
      const std::size_t i = segment_at(s);
      const Point e = edge(i);
      const double len = cumulative_[i + 1] - cumulative_[i];
      depth = a + u1 * (b - a);
      x = ring_[i] + ((s - cumulative_[i]) / len) * e + depth * Point(-e.y(), e.x()) / len;
    } else {
      const double phi = std::min((w - seg_mass) / half_ring, wedge_cumulative_.back());
      const auto it = std::upper_bound(wedge_cumulative_.begin(), wedge_cumulative_.end(), phi);
      const std::size_t k = std::min<std::size_t>(std::distance(wedge_cumulative_.begin(), it), reflex_.size()) - 1;
      const std::size_t v = reflex_[k];
      const Point in = edge((v + ring_.size() - 1) % ring_.size()).normalized();
      const double alpha = phi - wedge_cumulative_[k];
      // Rotate the inward normal of the incoming edge clockwise by alpha.
      const Point start(-in.y(), in.x());
      const Point dir(std::cos(alpha) * start.x() + std::sin(alpha) * start.y(),
                      -std::sin(alpha) * start.x() + std::cos(alpha) * start.y());
      depth = std::sqrt(a * a + u1 * (b * b - a * a));
      x = ring_[v] + depth * dir;
    }
    // Accept only draws whose nearest boundary feature is the one sampled.
    const BoundaryQuery q = query(x);
    const double tol = 1e-9 * depth + 4e-16 * (1.0 + x.cwiseAbs().maxCoeff());
    if (!q.inside || q.distance < depth - tol) return {x, 0.0};
    return {x, total};
  }

 private:
  Point edge(std::size_t i) const { return ring_[(i + 1) % ring_.size()] - ring_[i]; }

  std::size_t segment_at(double s) const {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const std::size_t i = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
    return std::clamp<std::size_t>(i, 1, ring_.size()) - 1;
  }

  std::vector<Point> ring_;
  SegmentHierarchy tree_;
  bool degenerate_ = false;
  std::vector<double> cumulative_;
  std::vector<std::uint32_t> reflex_;
  std::vector<double> wedge_cumulative_;
};

class ReductionShape final : public DomainShape {
 public:
  ReductionShape(Domain base, ReductionInfo info) : base_(std::move(base)), info_(std::move(info)) {}

  BoundaryQuery query(const Point& x) const override {
    const BoundaryQuery inner = base_.query(x);
    const double rho = (x - info_.x0).norm();
    return {std::min(inner.distance, std::abs(rho - info_.outer_radius)), inner.inside || rho > info_.outer_radius};
  }
  Point boundary_point(double u) const override {
    const double split = base_.perimeter() / perimeter();
    if (u < split) return base_.boundary_point(u / split);
    const double theta = 2.0 * pi * (u - split) / (1.0 - split);
    return info_.x0 + info_.outer_radius * Point(std::cos(theta), std::sin(theta));
  }
  double perimeter() const override { return base_.perimeter() + 2.0 * pi * info_.outer_radius; }
  std::vector<Point> boundary_samples() const override {
    std::vector<Point> pts = base_.boundary_samples();
    constexpr int kCircle = 2048;
    for (int i = 0; i < kCircle; ++i) {
      const double theta = 2.0 * pi * i / kCircle;
      pts.push_back(info_.x0 + info_.outer_radius * Point(std::cos(theta), std::sin(theta)));
    }
    return pts;
  }

 private:
  Domain base_;
  ReductionInfo info_;
};

}  // namespace

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::disk: return "disk";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::polygon: return "polygon";
    case DomainKind::koch_prefractal: return "koch_prefractal";
    case DomainKind::comb: return "comb";
    case DomainKind::reduction: return "reduction";
  }
  return "unknown";
}

ShellSample DomainShape::inner_shell_sample(double, double, double, double) const {
  throw EstimatorError("domain has no inner shell parametrization");
}

Domain::Domain(Properties props, std::shared_ptr<const DomainShape> shape)
    : props_(std::move(props)), shape_(std::move(shape)) {}

double shoelace_area(std::span<const Point> ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) twice += cross(ring[i], ring[(i + 1) % ring.size()]);
  return 0.5 * twice;
}

double koch_area(int level) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 0; k < level; ++k) {
    sum += term;
    term *= 4.0 / 9.0;
  }
  return std::sqrt(3.0) / 4.0 * (1.0 + sum / 3.0);
}

std::vector<Point> koch_vertices(int level) {
  if (level < 0 || level > kMaxKochLevel)
    throw EstimatorError("koch level must lie in [0, " + std::to_string(kMaxKochLevel) + "], got " +
                         std::to_string(level));
  std::vector<Point> ring{Point(0, 0), Point(1, 0), Point(0.5, std::sqrt(3.0) / 2.0)};
  const double bump = std::sqrt(3.0) / 6.0;
  for (int l = 0; l < level; ++l) {
    std::vector<Point> next;
    next.reserve(4 * ring.size());
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point a = ring[i];
      const Point d = ring[(i + 1) % ring.size()] - a;
      next.push_back(a);
      next.push_back(a + d / 3.0);
      next.push_back(a + 0.5 * d + bump * Point(d.y(), -d.x()));
      next.push_back(a + 2.0 * d / 3.0);
    }
    ring = std::move(next);
  }
  return ring;
}

Domain make_disk(const Point& center, double radius) {
  if (!(radius > 0.0)) throw EstimatorError("disk radius must be positive");
  Domain::Properties props;
  props.kind = DomainKind::disk;
  props.label = "disk";
  props.bbox = {(center.array() - radius).matrix(), (center.array() + radius).matrix()};
  props.diameter = 2.0 * radius;
  props.area_exact = pi * radius * radius;
  return Domain(std::move(props), std::make_shared<DiskShape>(center, radius));
}

namespace {

Domain polygon_domain(std::vector<Point> ring, DomainKind kind, std::string label) {
  if (ring.size() < 2) throw EstimatorError("polygon needs at least two vertices");
  if (shoelace_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());
  Domain::Properties props;
  props.kind = kind;
  props.label = std::move(label);
  props.bbox = bounding_box(ring);
  props.diameter = point_set_diameter(ring);
  props.area_exact = shoelace_area(ring);
  return Domain(std::move(props), std::make_shared<PolygonShape>(std::move(ring)));
}

}  // namespace

Domain make_rectangle(const Point& lo, const Point& hi) {
  if (!((hi - lo).array() > 0.0).all()) throw EstimatorError("rectangle corners must satisfy lo < hi");
  Domain d = polygon_domain({lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y())}, DomainKind::rectangle,
                            "rectangle");
  return d;
}

Domain make_polygon(std::vector<Point> vertices, std::string label) {
  return polygon_domain(std::move(vertices), DomainKind::polygon, std::move(label));
}

Domain make_comb(int teeth, double tooth_height, double base_height) {
  if (teeth < 1 || !(tooth_height > 0.0) || !(base_height > 0.0))
    throw EstimatorError("comb needs teeth >= 1 and positive heights");
  const double w = 1.0 / (2 * teeth - 1);
  const double top = base_height + tooth_height;
  std::vector<Point> ring{Point(0, 0), Point(1, 0)};
  for (int j = teeth - 1; j >= 0; --j) {
    ring.emplace_back((2 * j + 1) * w, top);
    ring.emplace_back(2 * j * w, top);
    if (j > 0) {
      ring.emplace_back(2 * j * w, base_height);
      ring.emplace_back((2 * j - 1) * w, base_height);
    }
  }
  return polygon_domain(std::move(ring), DomainKind::comb, "comb");
}

Domain koch_prefractal(int level) {
  std::vector<Point> ring = koch_vertices(level);
  Domain::Properties props;
  props.kind = DomainKind::koch_prefractal;
  props.label = "koch" + std::to_string(level);
  props.bbox = bounding_box(ring);
  props.diameter = point_set_diameter(ring);
  props.area_exact = koch_area(level);
  props.feature_scale = std::pow(3.0, -level);
  props.level = level;
  return Domain(std::move(props), std::make_shared<PolygonShape>(std::move(ring)));
}

Domain reduction_domain(const Domain& domain, const Point& x0) {
  if (!domain.inside(x0)) throw EstimatorError("reduction centre x0 must lie inside the domain");
  ReductionInfo info;
  info.x0 = x0;
  info.base_diameter = domain.diameter();
  info.outer_radius = 2.0 * info.base_diameter;
  info.clip_half_width = kReductionClipFactor * info.base_diameter;
  Domain::Properties props;
  props.kind = DomainKind::reduction;
  props.label = "reduction_" + domain.label();
  props.bbox = {(x0.array() - info.clip_half_width).matrix(), (x0.array() + info.clip_half_width).matrix()};
  props.diameter = 2.0 * std::sqrt(2.0) * info.clip_half_width;
  props.feature_scale = domain.feature_scale();
  props.reduction = info;
  return Domain(std::move(props), std::make_shared<ReductionShape>(domain, info));
}

}  // namespace fraclab
