#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fraclab/core.hpp"

namespace fraclab {

enum class DomainKind { disk, rectangle, polygon, koch_prefractal, comb, reduction };

const char* to_string(DomainKind kind);

/// Distance to the boundary together with the membership flag; both come
/// out of one nearest-feature search.
struct BoundaryQuery {
  double distance = 0.0;
  bool inside = false;
};

/// A point drawn from a distance shell {a < d_Omega <= b} of the domain
/// with its importance weight (0 when the draw is rejected).
struct ShellSample {
  Point x = Point::Zero();
  double weight = 0.0;
};

/// Geometry behind a Domain.
class DomainShape {
 public:
  virtual ~DomainShape() = default;
  virtual BoundaryQuery query(const Point& x) const = 0;
  /// Boundary point at arc-length fraction u in [0, 1).
  virtual Point boundary_point(double u) const = 0;
  virtual double perimeter() const = 0;
  /// Vertices of the generating polyline, or dense samples of a curve.
  virtual std::vector<Point> boundary_samples() const = 0;
  virtual bool has_shell_sampler() const { return false; }
  /// Draw from the inner shell {x in Omega : a < d(x) <= b} using two
  /// uniforms; E[weight * g(x)] is the integral of g over the shell.
  virtual ShellSample inner_shell_sample(double a, double b, double u0, double u1) const;
};

/// Extra data of the bounded-to-unbounded reduction G = Omega u Omega_1.
struct ReductionInfo {
  Point x0 = Point::Zero();
  /// M = diam Omega.
  double base_diameter = 0.0;
  /// Omega_1 is the complement of the closed ball B(x0, 2M).
  double outer_radius = 0.0;
  /// Measurements on G are confined to the box x0 +- clip_half_width.
  double clip_half_width = 0.0;
};

/// A bounded open planar set given by its exact distance oracle. Immutable
/// and cheap to copy; safe to share across threads.
class Domain {
 public:
  struct Properties {
    DomainKind kind = DomainKind::polygon;
    std::string label;
    Box bbox;
    double diameter = 0.0;
    std::optional<double> area_exact;
    /// Length below which the generating polyline stops resembling the set
    /// it approximates (segment length of a prefractal); 0 for exact shapes.
    double feature_scale = 0.0;
    int level = -1;
    std::optional<ReductionInfo> reduction;
  };

  Domain(Properties props, std::shared_ptr<const DomainShape> shape);

  DomainKind kind() const { return props_.kind; }
  const std::string& label() const { return props_.label; }
  const Box& bbox() const { return props_.bbox; }
  double diameter() const { return props_.diameter; }
  const std::optional<double>& area_exact() const { return props_.area_exact; }
  double feature_scale() const { return props_.feature_scale; }
  int level() const { return props_.level; }
  const std::optional<ReductionInfo>& reduction() const { return props_.reduction; }

  BoundaryQuery query(const Point& x) const { return shape_->query(x); }
  double dist_boundary(const Point& x) const { return shape_->query(x).distance; }
  bool inside(const Point& x) const { return shape_->query(x).inside; }
  Point boundary_point(double u) const { return shape_->boundary_point(u); }
  double perimeter() const { return shape_->perimeter(); }
  std::vector<Point> boundary_samples() const { return shape_->boundary_samples(); }
  bool has_shell_sampler() const { return shape_->has_shell_sampler(); }
  ShellSample inner_shell_sample(double a, double b, double u0, double u1) const {
    return shape_->inner_shell_sample(a, b, u0, u1);
  }

  const DomainShape& shape() const { return *shape_; }

 private:
  Properties props_;
  std::shared_ptr<const DomainShape> shape_;
};

/// Exact Euclidean distance from x to the generating boundary.
inline double dist_to_boundary(const Domain& domain, const Point& x) {
  return domain.dist_boundary(x);
}

Domain make_disk(const Point& center = Point::Zero(), double radius = 1.0);
Domain make_rectangle(const Point& lo, const Point& hi);
inline Domain make_unit_square() { return make_rectangle(Point(0, 0), Point(1, 1)); }
/// Closed polygon; orientation is normalized to counter-clockwise. Two
/// vertices give a doubled segment, a boundary without interior.
Domain make_polygon(std::vector<Point> vertices, std::string label = "polygon");
/// Comb on [0, 1] x [0, base + tooth]: a base bar with `teeth` upright teeth
/// separated by equal gaps.
Domain make_comb(int teeth = 4, double tooth_height = 0.5, double base_height = 0.25);
/// Snowflake from the unit-side equilateral triangle after `level` Koch
/// substitutions (0 <= level <= 10).
Domain koch_prefractal(int level);
/// G = Omega u (R^2 \ closed B(x0, 2M)), M = diam Omega, clipped to the box
/// x0 +- 8M for measurements.
Domain reduction_domain(const Domain& domain, const Point& x0);

inline constexpr int kMaxKochLevel = 10;
inline constexpr double kReductionClipFactor = 8.0;

double shoelace_area(std::span<const Point> ring);
/// sqrt(3)/4 * (1 + (1/3) * sum_{k<level} (4/9)^k).
double koch_area(int level);
/// Vertices of the level-`level` snowflake, counter-clockwise.
std::vector<Point> koch_vertices(int level);

}  // namespace fraclab
