#pragma once

#include <cstdint>

#include "fraclab/core.hpp"
#include "fraclab/domain.hpp"

namespace fraclab {

struct PlumpnessOptions {
  int boundary_points = 32;
  int interior_points = 32;
  /// Geometric radii from diam down to r_min (0 selects max(1e-3 diam, 3 feature_scale)).
  int radii = 12;
  double r_min = 0.0;
  int directions = 64;
  int steps = 16;
};

struct PlumpnessReport {
  double kappa = 0.0;
  bool pass = false;
  /// min over (x, r) of max over candidates z of d(z) / r.
  double worst_ratio = 0.0;
  Point witness_x = Point::Zero();
  double witness_r = 0.0;
  Point witness_z = Point::Zero();
  std::uint64_t checks = 0;
};

/// Searches, for sampled x in the closure and radii r < diam, for a centre
/// z in the closed ball B(x, r) with B(z, kappa r) inside the domain. A pass
/// certifies the sampled scales only.
PlumpnessReport plumpness_check(const Domain& domain, double kappa, const SampleConfig& cfg,
                                const PlumpnessOptions& opts = {});

}  // namespace fraclab
