#include "fraclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fraclab/parallel.hpp"
#include "fraclab/random.hpp"
#include "fraclab/tube.hpp"

namespace fraclab {

namespace {

using std::numbers::pi;

std::string fixed(double v, int digits = 4) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

/// Area of B(c, r) outside the closed disk B(0, R), where |c| = dist.
double disk_outside_area(double r, double R, double dist) {
  const double full = pi * r * r;
  if (dist + r <= R) return 0.0;
  if (dist >= r + R) return full;
  if (dist + R <= r) return full - pi * R * R;
  const double a = std::acos(std::clamp((dist * dist + r * r - R * R) / (2.0 * dist * r), -1.0, 1.0));
  const double b = std::acos(std::clamp((dist * dist + R * R - r * r) / (2.0 * dist * R), -1.0, 1.0));
  const double k = 0.5 * std::sqrt(std::max(0.0, (-dist + r + R) * (dist + r - R) * (dist - r + R) * (dist + r + R)));
  const double lens = r * r * a + R * R * b - k;
  return std::max(0.0, full - lens);
}

IntegralEstimate estimate_of(const MeanAccumulator& acc) {
  return {acc.mean(), acc.standard_error(), acc.count};
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::dense: return "dense";
    case Verdict::dense_critical: return "dense_critical";
    case Verdict::not_dense: return "not_dense";
    case Verdict::open_case: return "open_case";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::likely: return "likely";
    case Membership::unlikely: return "unlikely";
    case Membership::undetermined: return "undetermined";
  }
  return "unknown";
}

DensityVerdict density_verdict(const SobolevParams& params, const CodimEstimates& codims,
                               const PlumpnessReport* plump, const HomogeneityReport* homog) {
  params.validate();
  DensityVerdict out;
  out.sp = params.sp();
  out.codim_lower = codims.lower.value;
  out.codim_upper = codims.upper.value;
  if (codims.lower.domain != codims.upper.domain) throw EstimatorError("codimension estimates come from different domains");
  out.margin = std::max(0.0, out.codim_upper - out.codim_lower) + kVerdictSlack;
  if (plump) out.plump = plump->pass;
  if (homog) out.homogeneous = homog->stable;
  const std::string band = "[" + fixed(out.codim_lower - out.margin) + ", " + fixed(out.codim_upper + out.margin) + "]";

  if (out.sp < out.codim_lower - out.margin) {
    out.verdict = Verdict::dense;
    out.rationale = "sp = " + fixed(out.sp) + " lies below the codimension band " + band;
    return out;
  }
  if (out.sp > out.codim_upper + out.margin) {
    if (!plump) throw EstimatorError("verdict above the codimension band needs a plumpness report");
    if (plump->pass) {
      out.verdict = Verdict::not_dense;
      out.rationale = "sp = " + fixed(out.sp) + " lies above the codimension band " + band +
                      " and the domain is plump at kappa = " + fixed(plump->kappa, 3);
    } else {
      out.verdict = Verdict::inconclusive;
      out.rationale = "sp lies above the codimension band but the plumpness search failed";
    }
    return out;
  }
  if (params.p == 1.0) {
    out.verdict = Verdict::open_case;
    out.rationale = "p = 1 with sp = " + fixed(out.sp) + " inside the codimension band " + band +
                    ": no density criterion applies";
    return out;
  }
  if (!homog) throw EstimatorError("verdict inside the codimension band needs a homogeneity report");
  const double sigma = kAmbientDim - out.sp;
  if (std::abs(homog->sigma - sigma) > 1e-9)
    throw EstimatorError("homogeneity report uses sigma = " + fixed(homog->sigma, 6) + ", expected d - sp = " +
                         fixed(sigma, 6));
  if (homog->stable) {
    out.verdict = Verdict::dense_critical;
    out.rationale = "p > 1, sp = " + fixed(out.sp) + " inside the codimension band " + band +
                    " and the boundary is (d - sp)-homogeneous at sampled scales";
  } else {
    out.verdict = Verdict::inconclusive;
    out.rationale = "sp lies inside the codimension band but (d - sp)-homogeneity was not observed";
  }
  return out;
}

void check_cutoff_resolution(const Domain& domain, int n_max) {
  if (domain.kind() != DomainKind::koch_prefractal) return;
  const double need = (3.0 / n_max) / 10.0;
  if (domain.feature_scale() > need * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "resolution rule violated: koch level " << domain.level() << " has segment length "
        << domain.feature_scale() << " > (3/n_max)/10 = " << need << " for n_max = " << n_max;
    throw EstimatorError(msg.str());
  }
}

CutoffSeries cutoff_decay_experiment(const Domain& domain, const SobolevParams& params, const std::vector<int>& n_grid,
                                     const SampleConfig& cfg) {
  params.validate();
  if (n_grid.size() < 3) throw ConfigError("cutoff experiment needs at least 3 values of n");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ConfigError("cutoff indices must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("cutoff indices must be strictly increasing");
  }
  if (!(3.0 / n_grid.front() < domain.diameter())) throw EstimatorError("3/n must stay below the diameter");
  check_cutoff_resolution(domain, n_grid.back());

  CutoffSeries out;
  out.domain = domain.label();
  out.s = params.s;
  out.p = params.p;
  out.n_grid = n_grid;
  out.seed = cfg.seed;
  const double sp = params.sp();
  for (int n : n_grid) {
    SampleConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, "cutoff_n" + std::to_string(n));
    const SeminormEstimate est = gagliardo_seminorm_p(cutoff_field(n), domain, params, sub);
    out.seminorm_p.push_back(est.value_p);
    out.seminorm_std_error.push_back(est.std_error);
    out.tube_volume.push_back(inner_tube_volume(domain, 3.0 / n, cfg, Method::grid).volume);
  }

  const std::size_t m = n_grid.size();
  auto scale = [&](std::size_t i) { return std::pow(static_cast<double>(n_grid[i]), sp) * out.tube_volume[i]; };
  out.C = out.seminorm_p[0] / scale(0);
  out.envelope_ok = true;
  out.monotone_decreasing = true;
  for (std::size_t i = 0; i < m; ++i) {
    out.tube_bound.push_back(out.C * scale(i));
    // The calibration inherits the noise of the first estimate.
    const double calib_se = out.seminorm_std_error[0] * scale(i) / scale(0);
    const double slack = 2.0 * std::hypot(out.seminorm_std_error[i], i == 0 ? 0.0 : calib_se);
    const bool holds = out.seminorm_p[i] <= out.tube_bound[i] + slack;
    out.envelope_holds.push_back(holds);
    out.envelope_ok = out.envelope_ok && holds;
    if (i > 0) {
      const double step = 2.0 * std::hypot(out.seminorm_std_error[i], out.seminorm_std_error[i - 1]);
      if (out.seminorm_p[i] > out.seminorm_p[i - 1] + step) out.monotone_decreasing = false;
    }
  }

  std::vector<double> log_n;
  std::vector<double> log_v;
  std::vector<double> log_tube;
  for (std::size_t i = 0; i < m; ++i) {
    log_n.push_back(std::log(static_cast<double>(n_grid[i])));
    log_v.push_back(std::log(std::max(out.seminorm_p[i], std::numeric_limits<double>::min())));
    log_tube.push_back(std::log(out.tube_volume[i]));
  }
  out.fit = fit_line(log_n, log_v);
  out.fitted_slope = out.fit.slope;
  out.tube_slope = fit_line(log_n, log_tube).slope;

  const std::size_t top = std::min<std::size_t>(3, m);
  out.positive_floor = std::numeric_limits<double>::infinity();
  double var = 0.0;
  for (std::size_t i = m - top; i < m; ++i) {
    out.positive_floor = std::min(out.positive_floor, out.seminorm_p[i]);
    var += square(out.seminorm_std_error[i]);
  }
  out.positive_floor_std_error = std::sqrt(var);
  return out;
}

TubeFit inner_tube_fit(const Domain& domain, double r_min, double r_max, int scales, const SampleConfig& cfg) {
  if (!(r_min > 0.0 && r_max > r_min) || scales < 3) throw ConfigError("tube fit needs 0 < r_min < r_max and >= 3 scales");
  TubeFit out;
  std::vector<double> lr;
  std::vector<double> lv;
  for (int i = 0; i < scales; ++i) {
    const double r = r_min * std::pow(r_max / r_min, static_cast<double>(i) / (scales - 1));
    const double v = inner_tube_volume(domain, r, cfg, Method::grid).volume;
    out.r.push_back(r);
    out.volume.push_back(v);
    if (!(v > 0.0)) throw EstimatorError("inner tube has zero measured area at r = " + fixed(r, 6));
    lr.push_back(std::log(r));
    lv.push_back(std::log(v));
  }
  out.fit = fit_line(lr, lv);
  return out;
}

KochCaseStudy koch_case_study(const SampleConfig& cfg, const KochStudyOptions& opts) {
  KochCaseStudy out;
  out.level = opts.level;
  out.reference_threshold = 2.0 - std::log(4.0) / std::log(3.0);
  const Domain koch = koch_prefractal(opts.level);

  out.codims = assouad_codims(koch, cfg);
  out.dims = assouad_dimensions(out.codims);
  out.tube = inner_tube_fit(koch, 1e-3, 1e-1, 9, cfg);
  out.tube_exponent = out.tube.fit.slope;
  out.plump = plumpness_check(koch, 0.1, cfg);
  out.below = cutoff_decay_experiment(koch, {0.3, 1.0}, opts.n_grid, cfg);
  out.above = cutoff_decay_experiment(koch, {0.6, 2.0}, opts.n_grid, cfg);

  const std::vector<std::pair<SobolevParams, Verdict>> cases{
      {{0.3, 1.0}, Verdict::dense},
      {{0.5, 2.0}, Verdict::not_dense},
      {{0.36, 2.0}, Verdict::dense},
      {{out.reference_threshold, 1.0}, Verdict::open_case},
  };
  for (const auto& [params, expected] : cases) {
    KochVerdictCase c;
    c.params = params;
    c.expected = expected;
    const double margin = std::max(0.0, out.codims.upper.value - out.codims.lower.value) + kVerdictSlack;
    const bool in_band = params.sp() >= out.codims.lower.value - margin && params.sp() <= out.codims.upper.value + margin;
    if (in_band && params.p > 1.0) {
      const HomogeneityReport homog = homogeneity_check(koch, kAmbientDim - params.sp(), cfg);
      c.verdict = density_verdict(params, out.codims, &out.plump, &homog);
    } else {
      c.verdict = density_verdict(params, out.codims, &out.plump, nullptr);
    }
    c.matches = expected == Verdict::dense ? c.verdict.is_dense() : c.verdict.verdict == expected;
    out.verdicts.push_back(c);
  }
  out.threshold_estimate = 0.5 * (out.codims.lower.value + out.codims.upper.value);
  out.threshold_ok = std::abs(out.threshold_estimate - out.reference_threshold) <= opts.tolerance;
  return out;
}

HardyReductionReport hardy_reduction_experiment(const Domain& domain, const ScalarField& u, const ScalingFunction& phi,
                                                double R_loc, const SobolevParams& params, const SampleConfig& cfg,
                                                const ReductionOptions& opts) {
  params.validate();
  if (!(R_loc > 0.0)) throw ConfigError("localization factor R must be positive");
  if (R_loc > kReductionClipFactor - 1.0)
    throw ConfigError("localization factor R must not exceed " + fixed(kReductionClipFactor - 1.0, 0) +
                      " so that B(x0, M(1 + R)) fits the clip box");
  const Point x0 = opts.x0.value_or(deepest_point(domain));
  const Domain G = reduction_domain(domain, x0);
  const ReductionInfo info = *G.reduction();
  const double M = info.base_diameter;
  const double eta0 = opts.eta0.value_or(select_eta0(phi.claimed_eta, opts.dimA_boundary));
  const ScalingFunction psi = psi_extend(phi, M, eta0);
  const double p = params.p;

  HardyReductionReport out;
  out.domain = domain.label();
  out.field = u.label();
  out.phi = phi.label();
  out.s = params.s;
  out.p = p;
  out.x0 = x0;
  out.M = M;
  out.R_loc = R_loc;
  out.eta0 = eta0;
  out.psi_c_estimate = psi_lower_asymptotic_check(psi, M, R_loc, eta0).c_estimate;

  auto weight = [&](double d) {
    const double v = psi(d);
    if (!(v > 0.0)) throw EstimatorError("psi is not positive at t = " + fixed(d, 9));
    return v;
  };

  const std::uint64_t seed = derive_seed(cfg.seed, "hardy_reduction");
  const Box& box = domain.bbox();
  const double box_area = box.area();

  struct OmegaAcc {
    MeanAccumulator lhs, i1, i3, norm;
    std::uint64_t checks = 0, inclusion_failures = 0, geometry_failures = 0;
    void merge(const OmegaAcc& o) {
      lhs.merge(o.lhs);
      i1.merge(o.i1);
      i3.merge(o.i3);
      norm.merge(o.norm);
      checks += o.checks;
      inclusion_failures += o.inclusion_failures;
      geometry_failures += o.geometry_failures;
    }
  };
  const CounterRng rng(seed, 1);
  const OmegaAcc omega = accumulate_blocks<OmegaAcc>(cfg.samples, [&](std::uint64_t begin, std::uint64_t end) {
    OmegaAcc a;
    for (std::uint64_t i = begin; i < end; ++i) {
      const Point x = box.lo + box.extent().cwiseProduct(Point(rng.uniform(i, 0), rng.uniform(i, 1)));
      const BoundaryQuery qx = domain.query(x);
      if (!qx.inside || qx.distance == 0.0) {
        a.lhs.add(0.0);
        a.i1.add(0.0);
        a.i3.add(0.0);
        a.norm.add(0.0);
        continue;
      }
      const double dG = G.dist_boundary(x);
      const double ux = std::pow(std::abs(u(x, qx.distance)), p);
      const double w = weight(dG);
      const double radius = R_loc * dG;
      a.lhs.add(box_area * ux / w);
      a.norm.add(box_area * ux);

      const double rho = radius * std::sqrt(rng.uniform(i, 2));
      const double theta = 2.0 * pi * rng.uniform(i, 3);
      const Point y = x + rho * Point(std::cos(theta), std::sin(theta));
      const BoundaryQuery qy = domain.query(y);
      const double diff = qy.inside ? std::abs(u(x, qx.distance) - u(y, qy.distance)) : 0.0;
      a.i1.add(diff == 0.0 ? 0.0 : box_area * pi * radius * radius * std::pow(diff, p) / (w * dG * dG));

      const double dist0 = (x - x0).norm();
      const double outside = disk_outside_area(radius, info.outer_radius, dist0);
      a.i3.add(outside == 0.0 ? 0.0 : box_area * ux * outside / (w * dG * dG));
      ++a.checks;
      if (dist0 + radius > M * (1.0 + R_loc) * (1.0 + 1e-12)) ++a.inclusion_failures;
      if (outside > 0.0 && dG < (M / R_loc) * (1.0 - 1e-12)) ++a.geometry_failures;
    }
    return a;
  });

  // I2: x in Omega_1 within the clip box, y uniform over the domain's box.
  const Box& clip = G.bbox();
  const double clip_area = clip.area();
  const CounterRng rng2(seed, 2);
  struct OuterAcc {
    MeanAccumulator i2;
    std::uint64_t geometry_failures = 0;
    void merge(const OuterAcc& o) {
      i2.merge(o.i2);
      geometry_failures += o.geometry_failures;
    }
  };
  const OuterAcc outer = accumulate_blocks<OuterAcc>(cfg.samples, [&](std::uint64_t begin, std::uint64_t end) {
    OuterAcc a;
    for (std::uint64_t i = begin; i < end; ++i) {
      const Point x = clip.lo + clip.extent().cwiseProduct(Point(rng2.uniform(i, 0), rng2.uniform(i, 1)));
      const Point y = box.lo + box.extent().cwiseProduct(Point(rng2.uniform(i, 2), rng2.uniform(i, 3)));
      if ((x - x0).norm() <= info.outer_radius) {
        a.i2.add(0.0);
        continue;
      }
      const double dG = G.dist_boundary(x);
      const BoundaryQuery qy = domain.query(y);
      if (!qy.inside || (x - y).norm() > R_loc * dG) {
        a.i2.add(0.0);
        continue;
      }
      const double uy = std::pow(std::abs(u(y, qy.distance)), p);
      if (uy > 0.0 && dG < (M / R_loc) * (1.0 - 1e-12)) ++a.geometry_failures;
      a.i2.add(clip_area * box_area * uy / (weight(dG) * dG * dG));
    }
    return a;
  });

  out.lhs = estimate_of(omega.lhs);
  out.I1 = estimate_of(omega.i1);
  out.I3 = estimate_of(omega.i3);
  out.norm_p = estimate_of(omega.norm);
  out.I2 = estimate_of(outer.i2);
  out.inclusion_checks = omega.checks;
  out.inclusion_failures = omega.inclusion_failures;
  out.cross_geometry_failures = omega.geometry_failures + outer.geometry_failures;
  const double inf = std::numeric_limits<double>::infinity();
  const double fhi = out.I1.value + out.norm_p.value;
  out.c_witness = out.lhs.value == 0.0 ? 0.0 : (fhi > 0.0 ? out.lhs.value / fhi : inf);
  const double red = out.I1.value + out.I2.value + out.I3.value;
  out.c_reduction = out.lhs.value == 0.0 ? 0.0 : (red > 0.0 ? out.lhs.value / red : inf);
  return out;
}

MembershipReport membership_test(const ScalarField& f, const Domain& domain, const SobolevParams& params,
                                 const SampleConfig& cfg) {
  MembershipReport out;
  out.quotient = hardy_quotient(f, domain, params, cfg);
  if (out.quotient.diverged)
    out.in_W0 = Membership::unlikely;
  else if (out.quotient.tail_slope <= kMembershipLikelySlope)
    out.in_W0 = Membership::likely;
  else
    out.in_W0 = Membership::undetermined;
  return out;
}

}  // namespace fraclab
