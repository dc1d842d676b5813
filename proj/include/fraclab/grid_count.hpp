#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fraclab/core.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab {

/// Verdict of a region test on a block of grid cells.
enum class Cover { none, all, mixed };

/// A uniform grid of nx x ny cells of size h whose first cell has its lower
/// left corner at `origin`. Cell (i, j) has centre origin + h (i + 1/2, j + 1/2).
struct CellGrid {
  Point origin = Point::Zero();
  double h = 0.0;
  std::int64_t nx = 0;
  std::int64_t ny = 0;

  Point cell_center(std::int64_t i, std::int64_t j) const {
    return origin + h * Point(static_cast<double>(i) + 0.5, static_cast<double>(j) + 0.5);
  }
  double cell_area() const { return h * h; }
  double cell_count() const { return static_cast<double>(nx) * static_cast<double>(ny); }
};

/// Counts grid cells whose centres belong to a region. `classify(c, radius)`
/// must return `all` or `none` when every cell centre within `radius` of c
/// is certainly in or out of the region, and `mixed` otherwise; with
/// radius = 0 it must decide the single centre c. Blocks are refined
/// quadtree-style, so the count equals a cell-by-cell classification.
template <class Classify>
std::uint64_t count_cells(const CellGrid& grid, Classify&& classify) {
  constexpr std::int64_t kTile = 64;
  const std::int64_t tx = (grid.nx + kTile - 1) / kTile;
  const std::int64_t ty = (grid.ny + kTile - 1) / kTile;
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(tx * ty), 0);

  struct Block {
    std::int64_t i0, i1, j0, j1;
  };
  parallel_for(counts.size(), [&](std::size_t t) {
    const std::int64_t bi = static_cast<std::int64_t>(t) % tx;
    const std::int64_t bj = static_cast<std::int64_t>(t) / tx;
    std::vector<Block> stack{{bi * kTile, std::min(grid.nx, (bi + 1) * kTile), bj * kTile,
                              std::min(grid.ny, (bj + 1) * kTile)}};
    std::uint64_t count = 0;
    while (!stack.empty()) {
      const Block b = stack.back();
      stack.pop_back();
      const std::int64_t w = b.i1 - b.i0;
      const std::int64_t hgt = b.j1 - b.j0;
      const Point c = grid.origin + grid.h * Point(0.5 * static_cast<double>(b.i0 + b.i1),
                                                   0.5 * static_cast<double>(b.j0 + b.j1));
      const double radius = 0.5 * grid.h * std::hypot(static_cast<double>(w - 1), static_cast<double>(hgt - 1));
      const Cover cover = classify(c, radius);
      if (cover == Cover::none) continue;
      if (cover == Cover::all) {
        count += static_cast<std::uint64_t>(w * hgt);
        continue;
      }
      if (w >= hgt) {
        const std::int64_t mid = b.i0 + w / 2;
        stack.push_back({b.i0, mid, b.j0, b.j1});
        stack.push_back({mid, b.i1, b.j0, b.j1});
      } else {
        const std::int64_t mid = b.j0 + hgt / 2;
        stack.push_back({b.i0, b.i1, b.j0, mid});
        stack.push_back({b.i0, b.i1, mid, b.j1});
      }
    }
    counts[t] = count;
  });
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  return total;
}

}  // namespace fraclab
