#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fraclab/core.hpp"
#include "fraclab/domain.hpp"

namespace fraclab {

/// One measured tube area.
struct TubeMeasurement {
  std::string domain;
  double r = 0.0;
  /// Outer (ball) radius; 0 for global measurements.
  double R = 0.0;
  std::optional<Point> center;
  double volume = 0.0;
  double std_error = 0.0;
  Method method = Method::grid;
  /// Cell count of the grid, or sample count for Monte Carlo.
  std::uint64_t samples = 0;
  double grid_h = 0.0;
  std::uint64_t seed = 0;
};

/// Area of the inner tube {x in Omega : d_Omega(x) <= r}. Grid cells are
/// classified by their centres with h <= r/8.
TubeMeasurement inner_tube_volume(const Domain& domain, double r, const SampleConfig& cfg,
                                  Method method = Method::grid);

/// Area of the two-sided tube {y : dist(y, boundary) <= r}.
TubeMeasurement boundary_tube_volume(const Domain& domain, double r, const SampleConfig& cfg,
                                     Method method = Method::grid);

/// Area of {y : dist(y, boundary) <= r} n B(x, R) for a boundary point x and
/// 0 < r < R < diam.
TubeMeasurement boundary_tube_ball_volume(const Domain& domain, const Point& x, double r, double R,
                                          const SampleConfig& cfg, Method method = Method::grid);

/// |V(E, x, lambda, r)| = |{y : dist(y, E) <= r, |x - y| <= lambda r}| with
/// no ordering constraint between lambda r and the diameter.
TubeMeasurement tube_in_ball(const Domain& domain, const Point& x, double r, double lambda,
                             const SampleConfig& cfg, Method method = Method::grid);

/// Tolerance for "x lies on the boundary", relative to the diameter.
inline constexpr double kBoundarySnap = 1e-9;

/// Upper bound on grid cells a single measurement may cover.
inline constexpr double kMaxGridCells = 4e12;

/// Cell size used for tube radius r under `cfg`; throws when the requested
/// size is coarser than r/8.
double tube_grid_h(double r, const SampleConfig& cfg);

}  // namespace fraclab
