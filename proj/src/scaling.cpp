#include "fraclab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fraclab/core.hpp"

namespace fraclab {

namespace {

std::string number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log(lo);
  const double step = n > 1 ? (std::log(hi) - a) / (n - 1) : 0.0;
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + step * i);
  if (n > 1) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

void require_H(double H) {
  if (!(H > 0.0 && H <= 1.0)) throw ConfigError("scaling constant H must lie in (0, 1], got " + number(H));
}

ScalingCheckReport scaling_check(const ScalingFunction& phi, double eta, double H, const ScalingGrid& grid,
                                 double t_lo, double t_hi) {
  require_H(H);
  if (grid.s_points < 2 || grid.t_points < 2) throw ConfigError("scaling grid needs at least 2 points per axis");
  const std::vector<double> ss = log_grid(grid.s_min, grid.s_max, grid.s_points);
  const std::vector<double> ts = log_grid(t_lo, t_hi, grid.t_points);
  ScalingCheckReport out;
  out.eta = eta;
  out.H = H;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (double s : ss) {
    const double base = phi(s);
    for (double t : ts) {
      const double margin = phi(s * t) / (H * std::pow(t, eta) * base) - 1.0;
      if (margin < out.worst_margin) {
        out.worst_margin = margin;
        out.witness_s = s;
        out.witness_t = t;
      }
    }
  }
  out.grid_points = static_cast<long long>(ss.size() * ts.size());
  out.pass = out.worst_margin >= -grid.tolerance;
  return out;
}

}  // namespace

const char* to_string(ScalingKind kind) {
  switch (kind) {
    case ScalingKind::power: return "power";
    case ScalingKind::tabulated: return "tabulated";
    case ScalingKind::extended: return "extended";
  }
  return "unknown";
}

ScalingFunction ScalingFunction::power(double exponent, double coefficient) {
  if (!(coefficient > 0.0) || !std::isfinite(exponent))
    throw ConfigError("power scaling function needs a positive coefficient and finite exponent");
  ScalingFunction f;
  f.kind_ = ScalingKind::power;
  f.label_ = coefficient == 1.0 ? "t^" + number(exponent) : number(coefficient) + "*t^" + number(exponent);
  f.eval_ = [exponent, coefficient](double t) { return coefficient * std::pow(t, exponent); };
  f.exponent_ = exponent;
  f.claimed_eta = exponent;
  return f;
}

ScalingFunction ScalingFunction::tabulated(std::vector<double> t, std::vector<double> values) {
  if (t.size() != values.size() || t.size() < 2) throw ConfigError("tabulated scaling function needs >= 2 pairs");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(values[i] > 0.0)) throw ConfigError("tabulated breakpoints and values must be positive");
    if (i > 0 && !(t[i] > t[i - 1])) throw ConfigError("tabulated breakpoints must be strictly increasing");
  }
  std::vector<double> lt(t.size());
  std::vector<double> lv(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    lt[i] = std::log(t[i]);
    lv[i] = std::log(values[i]);
  }
  ScalingFunction f;
  f.kind_ = ScalingKind::tabulated;
  f.label_ = "tabulated" + std::to_string(t.size());
  f.eval_ = [lt, lv](double x) {
    const double lx = std::log(x);
    const auto it = std::upper_bound(lt.begin(), lt.end(), lx);
    std::size_t i = static_cast<std::size_t>(std::distance(lt.begin(), it));
    i = std::clamp<std::size_t>(i, 1, lt.size() - 1);
    const double slope = (lv[i] - lv[i - 1]) / (lt[i] - lt[i - 1]);
    return std::exp(lv[i - 1] + slope * (lx - lt[i - 1]));
  };
  f.table_t_ = std::move(t);
  f.table_values_ = std::move(values);
  return f;
}

ScalingCheckReport wlsc_check(const ScalingFunction& phi, double eta, double H, const ScalingGrid& grid) {
  return scaling_check(phi, eta, H, grid, 1.0, grid.t_span);
}

ScalingCheckReport wusc_check(const ScalingFunction& phi, double eta, double H, const ScalingGrid& grid) {
  return scaling_check(phi, eta, H, grid, 1.0 / grid.t_span, 1.0);
}

double select_eta0(double eta, double dimA_boundary, int d) {
  if (!(dimA_boundary < d))
    throw EstimatorError("eta0 needs dim_A of the boundary below " + std::to_string(d) + ", got " +
                         number(dimA_boundary));
  const double eta0 = eta > 0.0 ? eta : 0.5 * (d - dimA_boundary);
  // eta0 + dimA - d < 0 is the requirement; a positive eta may violate it,
  // which the caller learns from the returned value.
  return eta0;
}

ScalingFunction psi_extend(const ScalingFunction& phi, double M, double eta0) {
  if (!(M > 0.0)) throw ConfigError("psi extension needs M > 0");
  if (!(eta0 > 0.0)) throw ConfigError("psi extension needs eta0 > 0");
  const double phi_M = phi(M);
  if (!(phi_M > 0.0)) throw EstimatorError("phi(M) must be positive, got " + number(phi_M));
  ScalingFunction psi;
  psi.kind_ = ScalingKind::extended;
  psi.label_ = "psi[" + phi.label() + ",M=" + number(M) + ",eta0=" + number(eta0) + "]";
  psi.eval_ = [phi, M, eta0, phi_M](double x) { return x <= M ? phi(x) : phi_M * std::pow(x / M, eta0); };
  psi.breakpoint_ = M;
  psi.eta0_ = eta0;
  psi.claimed_eta = eta0;
  psi.claimed_H = phi.claimed_H;
  return psi;
}

PsiAsymptoticReport psi_lower_asymptotic_check(const ScalingFunction& psi, double M, double R_loc, double eta0,
                                               int points, double z_max) {
  if (!(M > 0.0 && R_loc > 0.0)) throw ConfigError("psi asymptotic check needs M > 0 and R > 0");
  const double z_min = M / R_loc;
  if (!(z_max > z_min)) throw ConfigError("psi asymptotic check needs z_max > M/R");
  PsiAsymptoticReport out;
  out.c_estimate = std::numeric_limits<double>::infinity();
  for (double z : log_grid(z_min, z_max, std::max(points, 2))) {
    const double c = psi(z) / std::pow(z, eta0);
    if (c < out.c_estimate) {
      out.c_estimate = c;
      out.witness_z = z;
    }
  }
  out.pass = out.c_estimate > 0.0 && std::isfinite(out.c_estimate);
  return out;
}

}  // namespace fraclab
