#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fraclab {

/// Ordinary least-squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  /// Standard error of the slope (0 for fewer than three points).
  double slope_std_error = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Linear-interpolated quantile of `values` at q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Standard deviation of the q-quantile over `resamples` bootstrap
/// resamples drawn with a counter-based generator keyed by `seed`.
double bootstrap_quantile_error(std::span<const double> values, double q, std::uint64_t seed, int resamples = 200);

}  // namespace fraclab
