#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/core.hpp"
#include "fraclab/dimension.hpp"
#include "fraclab/domain.hpp"
#include "fraclab/fit.hpp"
#include "fraclab/plumpness.hpp"
#include "fraclab/scaling.hpp"
#include "fraclab/sobolev.hpp"

namespace fraclab {

enum class Verdict { dense, dense_critical, not_dense, open_case, inconclusive };

const char* to_string(Verdict v);

/// Extra width added to the codimension band before a verdict is called.
inline constexpr double kVerdictSlack = 0.03;

struct DensityVerdict {
  Verdict verdict = Verdict::inconclusive;
  double sp = 0.0;
  double codim_lower = 0.0;
  double codim_upper = 0.0;
  /// (codim_upper - codim_lower) + kVerdictSlack.
  double margin = 0.0;
  std::optional<bool> plump;
  std::optional<bool> homogeneous;
  std::string rationale;

  /// Cases I and II both assert W_0 = W.
  bool is_dense() const { return verdict == Verdict::dense || verdict == Verdict::dense_critical; }
};

/// Density trichotomy with estimator margins. The plumpness report is
/// required when sp lies above the band and the homogeneity report (at
/// sigma = d - sp) when p > 1 and sp lies inside it.
DensityVerdict density_verdict(const SobolevParams& params, const CodimEstimates& codims,
                               const PlumpnessReport* plump = nullptr, const HomogeneityReport* homog = nullptr);

struct CutoffSeries {
  std::string domain;
  double s = 0.0;
  double p = 0.0;
  std::vector<int> n_grid;
  std::vector<double> seminorm_p;
  std::vector<double> seminorm_std_error;
  /// |Omega_{3/n}| by grid counting.
  std::vector<double> tube_volume;
  /// C n^sp |Omega_{3/n}| with C calibrated at the smallest n.
  std::vector<double> tube_bound;
  double C = 0.0;
  /// seminorm_p[i] <= tube_bound[i] up to two combined standard errors.
  std::vector<bool> envelope_holds;
  bool envelope_ok = false;
  /// Each step down the grid rises by at most two combined standard errors.
  bool monotone_decreasing = false;
  LineFit fit;
  double fitted_slope = 0.0;
  /// Slope of log |Omega_{3/n}| against log n.
  double tube_slope = 0.0;
  /// Smallest value over the three largest n, with its RSS standard error.
  double positive_floor = 0.0;
  double positive_floor_std_error = 0.0;
  std::uint64_t seed = 0;
};

/// Throws unless a prefractal resolves 3/n_max: 3^-level <= (3/n_max)/10.
void check_cutoff_resolution(const Domain& domain, int n_max);

/// [v_n]^p for f = 1 on the domain across the n grid, with the
/// tube-bound envelope and the fitted decay slope.
CutoffSeries cutoff_decay_experiment(const Domain& domain, const SobolevParams& params, const std::vector<int>& n_grid,
                                     const SampleConfig& cfg);

struct TubeFit {
  std::vector<double> r;
  std::vector<double> volume;
  LineFit fit;
};

/// Log-log fit of the inner tube area over `scales` geometric radii.
TubeFit inner_tube_fit(const Domain& domain, double r_min, double r_max, int scales, const SampleConfig& cfg);

struct KochVerdictCase {
  SobolevParams params;
  Verdict expected = Verdict::inconclusive;
  DensityVerdict verdict;
  /// An expected `dense` is met by either density case.
  bool matches = false;
};

struct KochCaseStudy {
  int level = 7;
  double reference_threshold = 0.0;
  CodimEstimates codims;
  AssouadDimensions dims;
  TubeFit tube;
  double tube_exponent = 0.0;
  PlumpnessReport plump;
  CutoffSeries below;
  CutoffSeries above;
  std::vector<KochVerdictCase> verdicts;
  /// Midpoint of the codimension band.
  double threshold_estimate = 0.0;
  bool threshold_ok = false;
};

struct KochStudyOptions {
  int level = 7;
  std::vector<int> n_grid{8, 16, 32, 64, 128, 256};
  double tolerance = 0.06;
};

KochCaseStudy koch_case_study(const SampleConfig& cfg, const KochStudyOptions& opts = {});

struct ReductionOptions {
  /// Interior base point; defaults to deepest_point(domain).
  std::optional<Point> x0;
  /// Defaults to select_eta0(phi.claimed_eta, dimA_boundary).
  std::optional<double> eta0;
  double dimA_boundary = 1.0;
};

struct HardyReductionReport {
  std::string domain;
  std::string field;
  std::string phi;
  double s = 0.0;
  double p = 0.0;
  Point x0 = Point::Zero();
  double M = 0.0;
  double R_loc = 0.0;
  double eta0 = 0.0;
  IntegralEstimate I1;
  IntegralEstimate I2;
  IntegralEstimate I3;
  IntegralEstimate norm_p;
  /// Integral of |u|^p / phi(d_G) over the domain.
  IntegralEstimate lhs;
  /// lhs / (I1 + norm_p): the smallest constant of the weighted Hardy
  /// inequality with the L^p term at weight one.
  double c_witness = 0.0;
  /// lhs / (I1 + I2 + I3).
  double c_reduction = 0.0;
  double psi_c_estimate = 0.0;
  std::uint64_t inclusion_checks = 0;
  std::uint64_t inclusion_failures = 0;
  /// Contributions to I2 or I3 from points with d_G < M/R.
  std::uint64_t cross_geometry_failures = 0;
};

/// The bounded-to-unbounded reduction: u is extended by zero to
/// G = Omega u Omega_1 and the weighted Hardy inequality on G is split into
/// I1 (Omega x Omega), I2 (Omega_1 x Omega) and I3 (Omega x Omega_1).
HardyReductionReport hardy_reduction_experiment(const Domain& domain, const ScalarField& u, const ScalingFunction& phi,
                                                double R_loc, const SobolevParams& params, const SampleConfig& cfg,
                                                const ReductionOptions& opts = {});

enum class Membership { likely, unlikely, undetermined };

const char* to_string(Membership m);

/// Shell decay faster than 2^(-0.1 k) is read as a finite quotient.
inline constexpr double kMembershipLikelySlope = -0.1;

struct MembershipReport {
  Membership in_W0 = Membership::undetermined;
  HardyQuotient quotient;
};

/// W_0 membership through finiteness of the Hardy quotient.
MembershipReport membership_test(const ScalarField& f, const Domain& domain, const SobolevParams& params,
                                 const SampleConfig& cfg);

}  // namespace fraclab
