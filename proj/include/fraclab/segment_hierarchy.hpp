#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "fraclab/core.hpp"

namespace fraclab {

/// Nearest point of a polyline to a query point.
struct NearestSegment {
  double distance_sq = 0.0;
  std::uint32_t segment = 0;
  /// Parameter of the foot point along the segment, in [0, 1].
  double t = 0.0;
};

/// Bounding-box hierarchy over the segments of a closed polyline. Nodes
/// cover contiguous index ranges, which are spatially coherent for curves
/// generated by substitution.
class SegmentHierarchy {
 public:
  SegmentHierarchy() = default;
  /// Segment i joins ring[i] and ring[(i + 1) % n].
  explicit SegmentHierarchy(std::span<const Point> ring, std::uint32_t leaf_size = 8);

  NearestSegment nearest(const Point& x) const;

  std::size_t segment_count() const { return ring_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Box box;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);

  std::vector<Point> ring_;
  std::vector<Node> nodes_;
  std::uint32_t leaf_size_ = 8;
};

/// Squared distance from x to the segment [a, b], with the foot parameter.
inline double segment_distance_sq(const Point& x, const Point& a, const Point& b, double& t) {
  const Point d = b - a;
  const double len_sq = d.squaredNorm();
  t = len_sq > 0.0 ? std::clamp((x - a).dot(d) / len_sq, 0.0, 1.0) : 0.0;
  return (a + t * d - x).squaredNorm();
}

}  // namespace fraclab
