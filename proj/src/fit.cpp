#include "fraclab/fit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fraclab/core.hpp"
#include "fraclab/random.hpp"

namespace fraclab {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw EstimatorError("line fit needs at least two paired points");
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Map<const Eigen::VectorXd> xs(x.data(), n);
  const Eigen::Map<const Eigen::VectorXd> ys(y.data(), n);
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = xs;
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(ys);

  LineFit fit;
  fit.intercept = coef(0);
  fit.slope = coef(1);
  const Eigen::VectorXd residual = ys - design * coef;
  const double ss_res = residual.squaredNorm();
  const double ss_tot = (ys.array() - ys.mean()).square().sum();
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  const double sxx = (xs.array() - xs.mean()).square().sum();
  if (n > 2 && sxx > 0.0) fit.slope_std_error = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
  return fit;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw EstimatorError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= values.size()) return values.back();
  return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

double bootstrap_quantile_error(std::span<const double> values, double q, std::uint64_t seed, int resamples) {
  if (values.size() < 2 || resamples < 2) return 0.0;
  const CounterRng rng(seed, 0xb007);
  std::vector<double> draw(values.size());
  Eigen::VectorXd estimates(resamples);
  for (int b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto k = static_cast<std::size_t>(rng.uniform(static_cast<std::uint64_t>(b) * values.size() + i, 0) *
                                              static_cast<double>(values.size()));
      draw[i] = values[std::min(k, values.size() - 1)];
    }
    estimates(b) = quantile(draw, q);
  }
  const double mean = estimates.mean();
  return std::sqrt((estimates.array() - mean).square().sum() / (resamples - 1));
}

}  // namespace fraclab
