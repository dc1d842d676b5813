#include "fraclab/plumpness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fraclab/parallel.hpp"
#include "fraclab/random.hpp"

namespace fraclab {

namespace {

struct Best {
  double ratio = 0.0;
  Point z = Point::Zero();
};

Best best_center(const Domain& domain, const Point& x, double r, const PlumpnessOptions& opts) {
  Best best;
  auto consider = [&](const Point& z) {
    const BoundaryQuery q = domain.query(z);
    if (!q.inside) return;
    const double ratio = q.distance / r;
    if (ratio > best.ratio) best = {ratio, z};
  };
  consider(x);
  for (int i = 0; i < opts.directions; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / opts.directions;
    const Point w(std::cos(theta), std::sin(theta));
    for (int j = 1; j <= opts.steps; ++j) consider(x + (r * j / opts.steps) * w);
  }
  return best;
}

}  // namespace

PlumpnessReport plumpness_check(const Domain& domain, double kappa, const SampleConfig& cfg,
                                const PlumpnessOptions& opts) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError("plumpness constant kappa must lie in (0, 1)");
  if (opts.radii < 1 || opts.directions < 1 || opts.steps < 1) throw ConfigError("plumpness grid must be nonempty");
  const double diam = domain.diameter();

  const CounterRng rng(derive_seed(cfg.seed, "plumpness"));
  std::vector<Point> xs;
  for (int i = 0; i < opts.boundary_points; ++i)
    xs.push_back(domain.boundary_point((i + rng.uniform(static_cast<std::uint64_t>(i), 0)) / opts.boundary_points));
  const Box& box = domain.bbox();
  for (std::uint64_t i = 0; static_cast<int>(xs.size()) < opts.boundary_points + opts.interior_points && i < 1u << 20;
       ++i) {
    const Point x = box.lo + box.extent().cwiseProduct(Point(rng.uniform(i, 1), rng.uniform(i, 2)));
    if (domain.inside(x)) xs.push_back(x);
  }

  double r_min = opts.r_min > 0.0 ? opts.r_min : std::max(1e-3 * diam, 3.0 * domain.feature_scale());
  r_min = std::min(r_min, diam);
  std::vector<double> rs(static_cast<std::size_t>(opts.radii));
  for (int k = 0; k < opts.radii; ++k)
    rs[static_cast<std::size_t>(k)] = opts.radii == 1 ? diam : diam * std::pow(r_min / diam, double(k) / (opts.radii - 1));

  const std::size_t total = xs.size() * rs.size();
  std::vector<Best> results(total);
  parallel_for(total, [&](std::size_t k) { results[k] = best_center(domain, xs[k / rs.size()], rs[k % rs.size()], opts); });

  PlumpnessReport out;
  out.kappa = kappa;
  out.worst_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < total; ++k) {
    if (results[k].ratio < out.worst_ratio) {
      out.worst_ratio = results[k].ratio;
      out.witness_x = xs[k / rs.size()];
      out.witness_r = rs[k % rs.size()];
      out.witness_z = results[k].z;
    }
  }
  out.checks = total;
  out.pass = total > 0 && out.worst_ratio >= kappa;
  return out;
}

}  // namespace fraclab
