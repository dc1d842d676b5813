#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/core.hpp"
#include "fraclab/domain.hpp"
#include "fraclab/scaling.hpp"

namespace fraclab {

/// Order s in (0, 1) and integrability p in [1, inf).
struct SobolevParams {
  double s = 0.5;
  double p = 2.0;

  double sp() const { return s * p; }
  /// Throws ConfigError unless 0 < s < 1 and 1 <= p < inf.
  void validate() const;
};

/// |f(x) - f(y)| <= L |x - y|^alpha on the domain.
struct HolderModulus {
  double L = 0.0;
  double alpha = 1.0;
};

/// A real function on a domain. The evaluator receives the point and its
/// distance to the boundary, so distance-based fields cost nothing extra.
class ScalarField {
 public:
  using Evaluator = std::function<double(const Point& x, double dist)>;

  struct Traits {
    std::optional<double> known_bound;
    std::optional<HolderModulus> modulus;
  };

  ScalarField(std::string label, Evaluator f, Traits traits = {});

  double operator()(const Point& x, double dist) const { return (*f_)(x, dist); }
  double at(const Domain& domain, const Point& x) const { return (*f_)(x, domain.dist_boundary(x)); }

  const std::string& label() const { return label_; }
  const Traits& traits() const { return traits_; }
  const std::optional<double>& known_bound() const { return traits_.known_bound; }
  const std::optional<HolderModulus>& modulus() const { return traits_.modulus; }

 private:
  std::string label_;
  std::shared_ptr<const Evaluator> f_;
  Traits traits_;
};

/// v_n(d) = max(min(2 - n d, 1), 0).
inline double cutoff_vn(int n, double d) { return std::max(std::min(2.0 - n * d, 1.0), 0.0); }

ScalarField constant_field(double c);
/// x_axis (0 or 1).
ScalarField coordinate_field(int axis);
/// d(x)^beta for beta > 0.
ScalarField distance_power_field(double beta);
/// v_n(d(x)).
ScalarField cutoff_field(int n);
/// 0 for d <= a, 1 for d >= b, linear in d between.
ScalarField distance_ramp_field(double a, double b);
ScalarField scaled(double c, const ScalarField& f);
ScalarField sum(const ScalarField& f, const ScalarField& g);
ScalarField product(const ScalarField& f, const ScalarField& g);
/// f^N = min(max(f, -N), N).
ScalarField truncate_clip(const ScalarField& f, double N);
/// max(min(g, 1), 0).
ScalarField clip01(const ScalarField& g);

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Integral of |f|^p over the domain.
IntegralEstimate lp_norm_p(const ScalarField& f, const Domain& domain, double p, const SampleConfig& cfg,
                           Method method = Method::montecarlo);

struct SeminormOptions {
  /// Pairs closer than rho_min_factor * diam are left to the analytic tail bound.
  double rho_min_factor = 1e-5;
  /// Restricts both points to {d <= region_depth}.
  std::optional<double> region_depth;
  Method method = Method::montecarlo;
  /// Cells along the longer bounding-box side (grid method, even). The grid
  /// value is extrapolated from this and half the resolution; its std_error
  /// field holds the size of that correction.
  int grid_cells = 64;
};

struct SeminormEstimate {
  std::string domain;
  std::string field;
  double s = 0.0;
  double p = 0.0;
  /// [f]^p over the pairs with |x - y| >= rho_min.
  double value_p = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  Method method = Method::montecarlo;
  double rho_min = 0.0;
  /// Bound on the omitted near-diagonal part; +inf without a usable modulus.
  double bias_bound = 0.0;
  std::uint64_t seed = 0;
};

/// Gagliardo double integral of |f(x) - f(y)|^p / |x - y|^(2 + sp). The
/// Monte Carlo path draws x uniformly in the bounding box and y = x + rho w
/// with w uniform on the circle and rho log-uniform on [rho_min, diam].
SeminormEstimate gagliardo_seminorm_p(const ScalarField& f, const Domain& domain, const SobolevParams& params,
                                      const SampleConfig& cfg, const SeminormOptions& opts = {});

struct Lemma1Report {
  int n = 0;
  /// [f v_n]^p.
  double lhs = 0.0;
  double lhs_std_error = 0.0;
  /// n^sp * integral of |f|^p over the inner tube of radius 3/n.
  double term_mass = 0.0;
  /// Seminorm integral of f restricted to the inner tube of radius 3/n.
  double term_semi = 0.0;
  double tube_volume = 0.0;
  /// lhs / (term_mass + term_semi), or 0 when lhs vanishes.
  double implied_C = 0.0;
};

Lemma1Report lemma1_check(const ScalarField& f, const Domain& domain, const SobolevParams& params, int n,
                          const SampleConfig& cfg);

struct HardyShell {
  double inner = 0.0;
  double outer = 0.0;
  double contribution = 0.0;
  double std_error = 0.0;
};

struct HardyQuotient {
  std::string domain;
  std::string field;
  double s = 0.0;
  double p = 0.0;
  /// Core plus the sum over all shells.
  double value = 0.0;
  double std_error = 0.0;
  double delta0 = 0.0;
  double core = 0.0;
  std::vector<HardyShell> shells;
  /// Least-squares slope of log2(shell contribution) over the last shells.
  double tail_slope = 0.0;
  bool diverged = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr int kHardyShells = 40;
inline constexpr int kHardyTailShells = 8;
/// Shell sums decaying slower than 2^(-0.05 k) count as divergent.
inline constexpr double kHardyDivergenceSlope = -0.05;
/// Pilot draws deciding the sampler per shell, and the hit count above
/// which a shell is estimated from uniform draws.
inline constexpr std::uint64_t kHardyPilotSamples = 1 << 14;
inline constexpr double kHardyPilotHits = 64.0;

/// Interior cell centre farthest from the boundary on a 256-cell grid over
/// the bounding box.
Point deepest_point(const Domain& domain);
/// Distance to the boundary at deepest_point.
double inradius_estimate(const Domain& domain);

/// Integral of |f|^p d^(-sp) over the domain, stratified by dyadic
/// distance shells below the inradius.
HardyQuotient hardy_quotient(const ScalarField& f, const Domain& domain, const SobolevParams& params,
                             const SampleConfig& cfg);

/// Integral over x in Omega and y in Omega n B(x, R_loc d(x)) of
/// |u(x) - u(y)|^p / (phi(d(x)) d(x)^2).
IntegralEstimate hardy_rhs_localized(const ScalarField& u, const Domain& domain, const ScalingFunction& phi,
                                     double R_loc, double p, const SampleConfig& cfg);

}  // namespace fraclab
