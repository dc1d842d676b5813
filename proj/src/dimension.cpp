#include "fraclab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fraclab/fit.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/random.hpp"
#include "fraclab/tube.hpp"

namespace fraclab {

namespace {

using std::numbers::pi;

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

void require_window(double lo, double hi, const char* what) {
  if (!(lo > 0.0 && hi > lo && std::isfinite(hi))) {
    std::ostringstream msg;
    msg << what << " window must satisfy 0 < min < max, got [" << lo << ", " << hi << "]";
    throw EstimatorError(msg.str());
  }
}

/// Stratified arc-length fractions: one uniform draw per stratum.
std::vector<Point> boundary_centers(const Domain& domain, int count, std::uint64_t seed, std::uint64_t stream) {
  const CounterRng rng(seed, stream);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double u = (i + rng.uniform(static_cast<std::uint64_t>(i), 0)) / count;
    out.push_back(domain.boundary_point(std::min(u, std::nextafter(1.0, 0.0))));
  }
  return out;
}

}  // namespace

const char* to_string(DimensionQuantity q) {
  switch (q) {
    case DimensionQuantity::minkowski_upper: return "minkowski_upper";
    case DimensionQuantity::assouad_codim_lower: return "assouad_codim_lower";
    case DimensionQuantity::assouad_codim_upper: return "assouad_codim_upper";
    case DimensionQuantity::assouad_dim_upper: return "assouad_dim_upper";
    case DimensionQuantity::assouad_dim_lower: return "assouad_dim_lower";
  }
  return "unknown";
}

int default_center_count(const SampleConfig& cfg) {
  return static_cast<int>(std::clamp<std::uint64_t>(cfg.samples / 16384, 16, 512));
}

DimensionEstimate minkowski_upper(const Domain& domain, const SampleConfig& cfg, const MinkowskiOptions& opts) {
  double r_min = opts.r_min;
  double r_max = opts.r_max;
  if (r_min == 0.0) r_min = std::max(resolution_floor(domain), 1e-4 * domain.diameter());
  if (r_max == 0.0) r_max = r_min * std::pow(10.0, 1.5);
  require_window(r_min, r_max, "Minkowski scale");
  if (opts.scales < 5) throw EstimatorError("Minkowski fit needs at least 5 scales");

  std::vector<double> log_r;
  std::vector<double> log_v;
  for (double r : geometric_grid(r_min, r_max, opts.scales)) {
    if (r >= domain.diameter()) continue;
    const TubeMeasurement m = boundary_tube_volume(domain, r, cfg, Method::grid);
    if (!(m.volume > 0.0)) continue;
    log_r.push_back(std::log(r));
    log_v.push_back(std::log(m.volume));
  }
  if (log_r.size() < 5) throw EstimatorError("fewer than 5 usable scales in the Minkowski window");

  const LineFit fit = fit_line(log_r, log_v);
  DimensionEstimate out;
  out.domain = domain.label();
  out.quantity = DimensionQuantity::minkowski_upper;
  out.value = kAmbientDim - fit.slope;
  out.std_error = fit.slope_std_error;
  out.r_min = r_min;
  out.r_max = r_max;
  out.fit_r2 = fit.r2;
  out.spread_min = std::numeric_limits<double>::infinity();
  out.spread_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < log_r.size(); ++i) {
    const double local = kAmbientDim - (log_v[i] - log_v[i - 1]) / (log_r[i] - log_r[i - 1]);
    out.spread_min = std::min(out.spread_min, local);
    out.spread_max = std::max(out.spread_max, local);
  }
  out.n_centers = 0;
  out.n_scalepairs = static_cast<int>(log_r.size());
  out.seed = cfg.seed;
  return out;
}

CodimEstimates assouad_codims(const Domain& domain, const SampleConfig& cfg, const CodimOptions& opts) {
  const double diam = domain.diameter();
  double R_min = opts.R_min;
  double R_max = opts.R_max;
  if (R_min == 0.0) R_min = std::max(diam / 16.0, 64.0 * resolution_floor(domain));
  if (R_max == 0.0) R_max = diam / 2.0;
  require_window(R_min, R_max, "outer radius");
  if (R_max >= diam) throw EstimatorError("outer radius must stay below the diameter");
  if (opts.outer_scales < 1) throw EstimatorError("outer_scales must be positive");
  for (double ratio : opts.ratios)
    if (!(ratio > 1.0)) throw EstimatorError("scale ratios must exceed 1");

  const int centers = opts.centers > 0 ? opts.centers : default_center_count(cfg);
  const std::uint64_t seed = derive_seed(cfg.seed, "assouad_codims");
  const std::vector<Point> xs = boundary_centers(domain, centers, seed, 1);
  const std::vector<double> Rs = geometric_grid(R_min, R_max, opts.outer_scales);

  const std::size_t pairs = xs.size() * Rs.size();
  std::vector<LocalExponent> exps(pairs);
  std::vector<double> r2s(pairs, 0.0);
  std::vector<char> usable(pairs, 0);
  parallel_for(pairs, [&](std::size_t k) {
    LocalExponent& e = exps[k];
    e.center = xs[k / Rs.size()];
    e.R = Rs[k % Rs.size()];
    std::array<double, 3> lx{};
    std::array<double, 3> ly{};
    for (std::size_t j = 0; j < opts.ratios.size(); ++j) {
      const double r = e.R / opts.ratios[j];
      SampleConfig sub = cfg;
      sub.seed = seed ^ mix64(k * 8 + j);
      e.volumes[j] = boundary_tube_ball_volume(domain, e.center, r, e.R, sub, opts.method).volume;
      if (!(e.volumes[j] > 0.0)) return;
      lx[j] = std::log(r / e.R);
      ly[j] = std::log(e.volumes[j] / (pi * e.R * e.R));
    }
    const LineFit fit = fit_line(lx, ly);
    e.exponent = fit.slope;
    r2s[k] = fit.r2;
    usable[k] = 1;
  });

  CodimEstimates out;
  std::vector<double> values;
  double r2_sum = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    if (!usable[k]) continue;
    out.exponents.push_back(exps[k]);
    values.push_back(exps[k].exponent);
    r2_sum += r2s[k];
  }
  if (values.size() < 3) throw EstimatorError("too few usable localized exponents");

  const double ratio_max = *std::max_element(opts.ratios.begin(), opts.ratios.end());
  auto make = [&](DimensionQuantity q, double level) {
    DimensionEstimate e;
    e.domain = domain.label();
    e.quantity = q;
    e.value = quantile(values, level);
    e.std_error = bootstrap_quantile_error(values, level, seed);
    e.r_min = R_min / ratio_max;
    e.r_max = R_max;
    e.fit_r2 = r2_sum / static_cast<double>(values.size());
    e.spread_min = *std::min_element(values.begin(), values.end());
    e.spread_max = *std::max_element(values.begin(), values.end());
    e.n_centers = centers;
    e.n_scalepairs = static_cast<int>(values.size());
    e.seed = cfg.seed;
    return e;
  };
  out.lower = make(DimensionQuantity::assouad_codim_lower, opts.lower_quantile);
  out.upper = make(DimensionQuantity::assouad_codim_upper, opts.upper_quantile);
  return out;
}

AssouadDimensions assouad_dimensions(const CodimEstimates& codims) {
  AssouadDimensions out;
  out.upper = codims.lower;
  out.upper.quantity = DimensionQuantity::assouad_dim_upper;
  out.upper.value = kAmbientDim - codims.lower.value;
  out.upper.spread_min = kAmbientDim - codims.lower.spread_max;
  out.upper.spread_max = kAmbientDim - codims.lower.spread_min;
  out.lower = codims.upper;
  out.lower.quantity = DimensionQuantity::assouad_dim_lower;
  out.lower.value = kAmbientDim - codims.upper.value;
  out.lower.spread_min = kAmbientDim - codims.upper.spread_max;
  out.lower.spread_max = kAmbientDim - codims.upper.spread_min;
  return out;
}

HomogeneityReport homogeneity_check(const Domain& domain, double sigma, const SampleConfig& cfg,
                                    const HomogeneityOptions& opts) {
  if (!std::isfinite(sigma)) throw EstimatorError("homogeneity exponent must be finite");
  if (opts.centers < 1 || opts.radii < 1) throw EstimatorError("homogeneity check needs centres and radii");
  double r_min = opts.r_min;
  double r_max = opts.r_max;
  if (r_min == 0.0) r_min = std::max(resolution_floor(domain), 1e-3 * domain.diameter());
  if (r_max == 0.0) r_max = r_min * std::pow(10.0, 1.5);
  require_window(r_min, r_max, "homogeneity radius");

  const std::uint64_t seed = derive_seed(cfg.seed, "homogeneity");
  const std::vector<Point> xs = boundary_centers(domain, opts.centers, seed, 2);
  const std::vector<double> rs = geometric_grid(r_min, r_max, opts.radii);
  const std::size_t nl = opts.lambdas.size();

  HomogeneityReport out;
  out.domain = domain.label();
  out.sigma = sigma;
  out.lambdas.assign(opts.lambdas.begin(), opts.lambdas.end());
  out.samples.resize(xs.size() * rs.size() * nl);
  parallel_for(out.samples.size(), [&](std::size_t k) {
    HomogeneitySample& s = out.samples[k];
    s.x = xs[k / (rs.size() * nl)];
    s.r = rs[(k / nl) % rs.size()];
    s.lambda = opts.lambdas[k % nl];
    s.volume = tube_in_ball(domain, s.x, s.r, s.lambda, cfg, Method::grid).volume;
  });

  out.L_by_lambda.assign(nl, 0.0);
  for (std::size_t k = 0; k < out.samples.size(); ++k) {
    const HomogeneitySample& s = out.samples[k];
    const double ratio = s.volume / (std::pow(s.r, kAmbientDim) * std::pow(s.lambda, sigma));
    out.L_by_lambda[k % nl] = std::max(out.L_by_lambda[k % nl], ratio);
  }
  out.L_estimate = *std::max_element(out.L_by_lambda.begin(), out.L_by_lambda.end());

  std::vector<double> ll;
  std::vector<double> lL;
  for (std::size_t j = 0; j < nl; ++j) {
    if (out.lambdas[j] < 4.0 || !(out.L_by_lambda[j] > 0.0)) continue;
    ll.push_back(std::log(out.lambdas[j]));
    lL.push_back(std::log(out.L_by_lambda[j]));
  }
  out.growth_exponent = ll.size() >= 2 ? fit_line(ll, lL).slope : 0.0;
  out.stable = out.growth_exponent <= opts.stability_slack;
  return out;
}

}  // namespace fraclab
