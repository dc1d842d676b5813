#include "fraclab/segment_hierarchy.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace fraclab {

namespace {

double box_distance_sq(const Box& box, const Point& x) {
  const Point below = (box.lo - x).cwiseMax(0.0);
  const Point above = (x - box.hi).cwiseMax(0.0);
  return (below + above).squaredNorm();
}

}  // namespace

SegmentHierarchy::SegmentHierarchy(std::span<const Point> ring, std::uint32_t leaf_size)
    : ring_(ring.begin(), ring.end()), leaf_size_(std::max<std::uint32_t>(1, leaf_size)) {
  if (ring_.size() < 2) throw EstimatorError("polyline needs at least two vertices");
  nodes_.reserve(2 * ring_.size() / leaf_size_ + 2);
  build(0, static_cast<std::uint32_t>(ring_.size()));
}

std::int32_t SegmentHierarchy::build(std::uint32_t begin, std::uint32_t end) {
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({});
  Box box{ring_[begin], ring_[begin]};
  const std::size_t n = ring_.size();
  for (std::uint32_t i = begin; i < end; ++i) {
    const Point& b = ring_[(i + 1) % n];
    box.lo = box.lo.cwiseMin(ring_[i]).cwiseMin(b);
    box.hi = box.hi.cwiseMax(ring_[i]).cwiseMax(b);
  }
  nodes_[index].box = box;
  nodes_[index].begin = begin;
  nodes_[index].end = end;
  if (end - begin > leaf_size_) {
    const std::uint32_t mid = begin + (end - begin) / 2;
    const std::int32_t left = build(begin, mid);
    const std::int32_t right = build(mid, end);
    nodes_[index].left = left;
    nodes_[index].right = right;
  }
  return index;
}

NearestSegment SegmentHierarchy::nearest(const Point& x) const {
  NearestSegment best{std::numeric_limits<double>::infinity(), 0, 0.0};
  const std::size_t n = ring_.size();
  std::array<std::int32_t, 128> stack{};
  std::size_t top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (box_distance_sq(node.box, x) >= best.distance_sq) continue;
    if (node.left < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        double t = 0.0;
        const double d2 = segment_distance_sq(x, ring_[i], ring_[(i + 1) % n], t);
        if (d2 < best.distance_sq) best = {d2, i, t};
      }
      continue;
    }
    const double dl = box_distance_sq(nodes_[node.left].box, x);
    const double dr = box_distance_sq(nodes_[node.right].box, x);
    // Push the farther child first so the nearer one is explored first.
    if (dl < dr) {
      stack[top++] = node.right;
      stack[top++] = node.left;
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return best;
}

}  // namespace fraclab
