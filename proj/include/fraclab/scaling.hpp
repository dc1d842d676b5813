#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fraclab {

enum class ScalingKind { power, tabulated, extended };

const char* to_string(ScalingKind kind);

/// A positive function phi on (0, inf) with its claimed scaling exponent.
class ScalingFunction {
 public:
  /// phi(t) = coefficient * t^exponent.
  static ScalingFunction power(double exponent, double coefficient = 1.0);
  /// Piecewise log-log linear through (t_i, phi_i), extended by the end
  /// slopes. Breakpoints must be strictly increasing and positive.
  static ScalingFunction tabulated(std::vector<double> t, std::vector<double> values);

  double operator()(double t) const { return eval_(t); }

  ScalingKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  /// Exponent of a power law.
  std::optional<double> exponent() const { return exponent_; }
  std::optional<double> breakpoint() const { return breakpoint_; }
  std::optional<double> eta0() const { return eta0_; }
  const std::vector<double>& table_t() const { return table_t_; }
  const std::vector<double>& table_values() const { return table_values_; }

  double claimed_eta = 0.0;
  double claimed_H = 1.0;

 private:
  friend ScalingFunction psi_extend(const ScalingFunction& phi, double M, double eta0);

  ScalingKind kind_ = ScalingKind::power;
  std::string label_;
  std::function<double(double)> eval_;
  std::optional<double> exponent_;
  std::optional<double> breakpoint_;
  std::optional<double> eta0_;
  std::vector<double> table_t_;
  std::vector<double> table_values_;
};

/// Log-spaced grids on which the scaling inequalities are checked. A pass
/// certifies the inequality at the grid points only.
struct ScalingGrid {
  int s_points = 1000;
  int t_points = 1000;
  double s_min = 1e-4;
  double s_max = 1e4;
  /// t range is [1, t_span] for WLSC and [1/t_span, 1] for WUSC.
  double t_span = 1e4;
  double tolerance = 1e-12;
};

struct ScalingCheckReport {
  bool pass = false;
  /// min over the grid of phi(st) / (H t^eta phi(s)) - 1.
  double worst_margin = 0.0;
  double witness_s = 0.0;
  double witness_t = 0.0;
  double eta = 0.0;
  double H = 1.0;
  long long grid_points = 0;
};

/// phi(st) >= H t^eta phi(s) for t >= 1.
ScalingCheckReport wlsc_check(const ScalingFunction& phi, double eta, double H, const ScalingGrid& grid = {});
/// The same inequality for t in (0, 1].
ScalingCheckReport wusc_check(const ScalingFunction& phi, double eta, double H, const ScalingGrid& grid = {});

/// eta if eta > 0, else the midpoint of (0, d - dimA_boundary).
double select_eta0(double eta, double dimA_boundary, int d = 2);

/// psi = phi on (0, M] and phi(M) (x/M)^eta0 beyond.
ScalingFunction psi_extend(const ScalingFunction& phi, double M, double eta0);

struct PsiAsymptoticReport {
  /// min over the grid z in [M/R, z_max] of psi(z) / z^eta0.
  double c_estimate = 0.0;
  double witness_z = 0.0;
  bool pass = false;
};

PsiAsymptoticReport psi_lower_asymptotic_check(const ScalingFunction& psi, double M, double R_loc, double eta0,
                                               int points = 1000, double z_max = 1e6);

}  // namespace fraclab
