#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fraclab/core.hpp"
#include "fraclab/domain.hpp"

namespace fraclab {

enum class DimensionQuantity {
  minkowski_upper,
  assouad_codim_lower,
  assouad_codim_upper,
  assouad_dim_upper,
  assouad_dim_lower,
};

const char* to_string(DimensionQuantity q);

/// A fitted dimension or codimension exponent with its diagnostics.
struct DimensionEstimate {
  std::string domain;
  DimensionQuantity quantity = DimensionQuantity::minkowski_upper;
  double value = 0.0;
  double std_error = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double fit_r2 = 0.0;
  /// Extremes of the localized exponents behind the estimate.
  double spread_min = 0.0;
  double spread_max = 0.0;
  int n_centers = 0;
  int n_scalepairs = 0;
  std::uint64_t seed = 0;
};

/// Smallest length at which a tube of the generating polyline stands in for
/// the tube of the set it approximates: ten feature lengths, or 0.
inline double resolution_floor(const Domain& domain) { return 10.0 * domain.feature_scale(); }

struct MinkowskiOptions {
  /// Scale window; 0 selects [max(floor, 1e-4 diam), 10^1.5 times that].
  double r_min = 0.0;
  double r_max = 0.0;
  int scales = 9;
};

/// Upper Minkowski dimension of the boundary from the decay of the global
/// two-sided tube area: log|E_r| = (d - dim) log r + const.
DimensionEstimate minkowski_upper(const Domain& domain, const SampleConfig& cfg, const MinkowskiOptions& opts = {});

/// One localized exponent: slope of log(|E_r n B(x, R)| / |B(x, R)|) against
/// log(r/R) over the scale ratios at a fixed centre and outer radius.
struct LocalExponent {
  Point center = Point::Zero();
  double R = 0.0;
  std::array<double, 3> volumes{};
  double exponent = 0.0;
};

struct CodimOptions {
  /// Boundary centres; 0 derives the count from cfg.samples.
  int centers = 0;
  int outer_scales = 4;
  /// Outer radius window; 0 selects [max(diam/16, 64 floor), diam/2].
  double R_min = 0.0;
  double R_max = 0.0;
  std::array<double, 3> ratios{4.0, 16.0, 64.0};
  double lower_quantile = 0.02;
  double upper_quantile = 0.98;
  Method method = Method::grid;
};

struct CodimEstimates {
  DimensionEstimate lower;
  DimensionEstimate upper;
  std::vector<LocalExponent> exponents;
};

/// Lower and upper Assouad codimension of the boundary as trimmed extremes
/// of localized exponents at arc-length-uniform boundary centres.
CodimEstimates assouad_codims(const Domain& domain, const SampleConfig& cfg, const CodimOptions& opts = {});

struct AssouadDimensions {
  DimensionEstimate upper;
  DimensionEstimate lower;
};

/// dim_upper = d - codim_lower and dim_lower = d - codim_upper.
AssouadDimensions assouad_dimensions(const CodimEstimates& codims);

/// Centre count used when CodimOptions::centers is 0.
int default_center_count(const SampleConfig& cfg);

struct HomogeneitySample {
  Point x = Point::Zero();
  double lambda = 0.0;
  double r = 0.0;
  double volume = 0.0;
};

struct HomogeneityOptions {
  int centers = 16;
  int radii = 4;
  /// Radius window; 0 selects [max(floor, 1e-3 diam), 10^1.5 times that].
  double r_min = 0.0;
  double r_max = 0.0;
  std::array<double, 4> lambdas{1.0, 4.0, 16.0, 64.0};
  /// L is called stable when sup V / (r^d lambda^sigma) grows no faster
  /// than lambda^stability_slack across lambda >= 4.
  double stability_slack = 0.075;
};

struct HomogeneityReport {
  std::string domain;
  double sigma = 0.0;
  /// max over samples of |V| / (r^d lambda^sigma).
  double L_estimate = 0.0;
  /// The same maximum restricted to each lambda.
  std::vector<double> L_by_lambda;
  std::vector<double> lambdas;
  /// Slope of log L_by_lambda against log lambda over lambda >= 4.
  double growth_exponent = 0.0;
  bool stable = false;
  std::vector<HomogeneitySample> samples;
};

HomogeneityReport homogeneity_check(const Domain& domain, double sigma, const SampleConfig& cfg,
                                    const HomogeneityOptions& opts = {});

}  // namespace fraclab
