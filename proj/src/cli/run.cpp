#include "fraclab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>

#include "fraclab/artifacts.hpp"
#include "fraclab/dimension.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/fit.hpp"
#include "fraclab/plumpness.hpp"
#include "fraclab/tube.hpp"

namespace fraclab {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) { return format_double(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

SobolevParams sobolev_params(const RunConfig& cfg) { return {cfg.s, cfg.p}; }

std::vector<double> geometric(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(hi / lo, count == 1 ? 0.0 : double(i) / (count - 1)));
  return out;
}

Json point_json(const Point& x) { return Json::array({x.x(), x.y()}); }

Json dimension_json(const DimensionEstimate& e) {
  return {{"quantity", to_string(e.quantity)}, {"value", e.value},       {"std_error", e.std_error},
          {"r_min", e.r_min},                  {"r_max", e.r_max},       {"fit_r2", e.fit_r2},
          {"spread_min", e.spread_min},        {"spread_max", e.spread_max}, {"n_centers", e.n_centers},
          {"n_scalepairs", e.n_scalepairs}};
}

void add_dimension_row(CsvTable& t, const DimensionEstimate& e) {
  t.add({e.domain, to_string(e.quantity), num(e.value), num(e.r_min), num(e.r_max), num(e.fit_r2), num(e.spread_min),
         num(e.spread_max), num(e.n_centers), num(e.n_scalepairs), num(e.seed)});
}

CsvTable exponent_table(const std::string& domain, const CodimEstimates& codims, std::uint64_t seed) {
  CsvTable t("codim_exponents");
  for (const LocalExponent& e : codims.exponents)
    t.add({domain, num(e.center.x()), num(e.center.y()), num(e.R), num(e.exponent), num(seed)});
  return t;
}

void add_cutoff_rows(CsvTable& t, const CutoffSeries& c) {
  for (std::size_t i = 0; i < c.n_grid.size(); ++i)
    t.add({c.domain, num(c.s), num(c.p), num(c.n_grid[i]), num(c.seminorm_p[i]), num(c.seminorm_std_error[i]),
           num(c.tube_volume[i]), num(c.tube_bound[i]), num(c.C), flag(c.envelope_holds[i]), num(c.seed)});
}

Json cutoff_json(const CutoffSeries& c) {
  return {{"s", c.s},
          {"p", c.p},
          {"C", c.C},
          {"envelope_ok", c.envelope_ok},
          {"monotone_decreasing", c.monotone_decreasing},
          {"fitted_slope", c.fitted_slope},
          {"tube_slope", c.tube_slope},
          {"positive_floor", c.positive_floor},
          {"positive_floor_std_error", c.positive_floor_std_error}};
}

std::string optional_flag(const std::optional<bool>& b) { return b ? flag(*b) : ""; }

void add_verdict_row(CsvTable& t, const std::string& domain, const SobolevParams& params, const DensityVerdict& v,
                     const std::string& expected, const std::string& matches) {
  t.add({domain, num(params.s), num(params.p), num(v.sp), num(v.codim_lower), num(v.codim_upper), num(v.margin),
         optional_flag(v.plump), optional_flag(v.homogeneous), to_string(v.verdict), expected, matches});
}

Json verdict_json(const DensityVerdict& v) {
  Json j{{"verdict", to_string(v.verdict)}, {"sp", v.sp},         {"codim_lower", v.codim_lower},
         {"codim_upper", v.codim_upper},    {"margin", v.margin}, {"rationale", v.rationale}};
  if (v.plump) j["plump"] = *v.plump;
  if (v.homogeneous) j["homogeneous"] = *v.homogeneous;
  return j;
}

Json scaling_json(const ScalingCheckReport& r) {
  return {{"pass", r.pass},           {"worst_margin", r.worst_margin}, {"witness_s", r.witness_s},
          {"witness_t", r.witness_t}, {"eta", r.eta},                   {"H", r.H},
          {"grid_points", r.grid_points}};
}

void add_scaling_row(CsvTable& t, const std::string& check, const ScalingFunction& phi, const ScalingCheckReport& r) {
  t.add({check, phi.label(), num(r.eta), num(r.H), flag(r.pass), num(r.worst_margin), num(r.witness_s),
         num(r.witness_t), std::to_string(r.grid_points)});
}

// Each command fills the summary and writes its tables.
using Command = void (*)(const RunConfig&, ArtifactWriter&, Json&);

void cmd_tube(const RunConfig& cfg, ArtifactWriter& w, Json& summary) {
  const Domain domain = build_domain(cfg);
  const SampleConfig scfg = sample_config(cfg);
  const Method method = parse_method(cfg.method);
  const std::vector<double> radii = cfg.r > 0.0 ? std::vector<double>{cfg.r} : geometric(cfg.r_min, cfg.r_max, cfg.scales);
  CsvTable t("tube");
  std::vector<double> log_r;
  std::vector<double> log_v;
  for (double r : radii) {
    const TubeMeasurement m = inner_tube_volume(domain, r, scfg, method);
    t.add({m.domain, num(m.r), num(m.R), "", "", num(m.volume), num(m.std_error), to_string(m.method), num(m.samples),
           num(m.seed)});
    if (m.volume > 0.0) {
      log_r.push_back(std::log(r));
      log_v.push_back(std::log(m.volume));
    }
  }
  w.write_csv(t);
  summary["method"] = to_string(method);
  summary["radii"] = radii.size();
  if (log_r.size() >= 3) {
    const LineFit fit = fit_line(log_r, log_v);
    summary["exponent"] = fit.slope;
    summary["exponent_std_error"] = fit.slope_std_error;
    summary["fit_r2"] = fit.r2;
  }
}

void cmd_dimension(const RunConfig& cfg, ArtifactWriter& w, Json& summary) {
  const Domain domain = build_domain(cfg);
  const SampleConfig scfg = sample_config(cfg);
  const DimensionEstimate mink = minkowski_upper(domain, scfg);
  CodimOptions opts;
  opts.centers = cfg.centers;
  const CodimEstimates codims = assouad_codims(domain, scfg, opts);
  const AssouadDimensions dims = assouad_dimensions(codims);
  CsvTable t("dimension");
  for (const DimensionEstimate* e : {&mink, &codims.lower, &codims.upper, &dims.upper, &dims.lower}) {
    add_dimension_row(t, *e);
    summary[to_string(e->quantity)] = dimension_json(*e);
  }
  w.write_csv(t);
  w.write_csv(exponent_table(domain.label(), codims, scfg.seed));
}

void cmd_seminorm(const RunConfig& cfg, ArtifactWriter& w, Json& summary) {
  const Domain domain = build_domain(cfg);
  const ScalarField f = build_field(cfg);
  const SampleConfig scfg = sample_config(cfg);
  SeminormOptions opts;
  opts.method = parse_method(cfg.method);
  const SeminormEstimate est = gagliardo_seminorm_p(f, domain, sobolev_params(cfg), scfg, opts);
  const IntegralEstimate norm = lp_norm_p(f, domain, cfg.p, scfg, opts.method);
  CsvTable t("sobolev");
  t.add({est.domain, est.field, num(est.s), num(est.p), "seminorm_p", num(est.value_p), num(est.std_error),
         num(est.samples), num(est.rho_min), num(est.bias_bound), flag(false), num(est.seed)});
  t.add({domain.label(), f.label(), num(cfg.s), num(cfg.p), "lp_norm_p", num(norm.value), num(norm.std_error),
         num(norm.samples), "", "", flag(false), num(scfg.seed)});
  w.write_csv(t);
  summary["field"] = f.label();
  summary["method"] = to_string(opts.method);
  summary["value_p"] = est.value_p;
  summary["std_error"] = est.std_error;
  summary["rho_min"] = est.rho_min;
  summary["bias_bound"] = est.bias_bound;
  summary["lp_norm_p"] = norm.value;
  summary["lp_norm_p_std_error"] = norm.std_error;
}

void cmd_hardy(const RunConfig& cfg, ArtifactWriter& w, Json& summary) {
  const Domain domain = build_domain(cfg);
  const ScalarField f = build_field(cfg);
  const SampleConfig scfg = sample_config(cfg);
  const MembershipReport m = membership_test(f, domain, sobolev_params(cfg), scfg);
  const HardyQuotient& q = m.quotient;
  CsvTable t("sobolev");
  t.add({q.domain, q.field, num(q.s), num(q.p), "hardy_quotient", num(q.value), num(q.std_error), num(q.samples), "",
         "", flag(q.diverged), num(q.seed)});
  w.write_csv(t);
  CsvTable shells("hardy_shells");
  shells.add({q.domain, q.field, num(q.s), num(q.p), "0", num(q.delta0), num(domain.diameter()), num(q.core), "",
              num(q.seed)});
  for (std::size_t k = 0; k < q.shells.size(); ++k) {
    const HardyShell& sh = q.shells[k];
    shells.add({q.domain, q.field, num(q.s), num(q.p), std::to_string(k + 1), num(sh.inner), num(sh.outer),
                num(sh.contribution), num(sh.std_error), num(q.seed)});
  }
  w.write_csv(shells);
  summary["field"] = q.field;
  summary["value"] = q.value;
  summary["std_error"] = q.std_error;
  summary["delta0"] = q.delta0;
  summary["core"] = q.core;
  summary["tail_slope"] = q.tail_slope;
  summary["diverged"] = q.diverged;
  summary["membership"] = to_string(m.in_W0);
}

void cmd_density(const RunConfig& cfg, ArtifactWriter& w, Json& summary) {
  const Domain domain = build_domain(cfg);
  const SampleConfig scfg = sample_config(cfg);
  const SobolevParams params = sobolev_params(cfg);
  CodimOptions opts;
  opts.centers = cfg.centers;
  const CodimEstimates codims = assouad_codims(domain, scfg, opts);
  const double margin = std::max(0.0, codims.upper.value - codims.lower.value) + kVerdictSlack;
  std::optional<PlumpnessReport> plump;
  std::optional<HomogeneityReport> homog;
  if (params.sp() > codims.upper.value + margin)
    plump = plumpness_check(domain, cfg.kappa, scfg);
  else if (params.sp() >= codims.lower.value - margin && params.p != 1.0)
    homog = homogeneity_check(domain, kAmbientDim - params.sp(), scfg);
  const DensityVerdict v = density_verdict(params, codims, plump ? &*plump : nullptr, homog ? &*homog : nullptr);

  CsvTable dims("dimension");
  add_dimension_row(dims, codims.lower);
  add_dimension_row(dims, codims.upper);
  w.write_csv(dims);
  CsvTable verdicts("verdicts");
  add_verdict_row(verdicts, domain.label(), params, v, "", "");
  w.write_csv(verdicts);
  summary["density"] = verdict_json(v);
  if (plump)
    summary["plumpness"] = {{"kappa", plump->kappa}, {"pass", plump->pass}, {"worst_ratio", plump->worst_ratio}};
  if (homog) {
    CsvTable h("homogeneity");
    for (std::size_t i = 0; i < homog->lambdas.size(); ++i)
      h.add({domain.label(), num(homog->sigma), num(homog->lambdas[i]), num(homog->L_by_lambda[i]),
             num(homog->growth_exponent), flag(homog->stable)});
    w.write_csv(h);
    summary["homogeneity"] = {{"sigma", homog->sigma},
                              {"L_estimate", homog->L_estimate},
                              {"growth_exponent", homog->growth_exponent},
                              {"stable", homog->stable}};
  }
}

void cmd_cutoff(const RunConfig& cfg, ArtifactWriter& w, Json& summary) {
  const Domain domain = build_domain(cfg);
  const CutoffSeries c = cutoff_decay_experiment(domain, sobolev_params(cfg), cfg.n_grid, sample_config(cfg));
  CsvTable t("cutoff");
  add_cutoff_rows(t, c);
  w.write_csv(t);
  summary["cutoff"] = cutoff_json(c);
}

void cmd_koch(const RunConfig& cfg, ArtifactWriter& w, Json& summary) {
  const SampleConfig scfg = sample_config(cfg);
  KochStudyOptions opts;
  opts.level = cfg.level;
  opts.n_grid = cfg.n_grid;
  const KochCaseStudy study = koch_case_study(scfg, opts);
  const std::string label = study.codims.lower.domain;

  CsvTable dims("dimension");
  for (const DimensionEstimate* e : {&study.codims.lower, &study.codims.upper, &study.dims.upper, &study.dims.lower})
    add_dimension_row(dims, *e);
  w.write_csv(dims);
  w.write_csv(exponent_table(label, study.codims, scfg.seed));
  CsvTable tube("tube");
  for (std::size_t i = 0; i < study.tube.r.size(); ++i)
    tube.add({label, num(study.tube.r[i]), "0", "", "", num(study.tube.volume[i]), "0", "grid", "", num(scfg.seed)});
  w.write_csv(tube);
  CsvTable cut("cutoff");
  add_cutoff_rows(cut, study.below);
  add_cutoff_rows(cut, study.above);
  w.write_csv(cut);
  CsvTable verdicts("verdicts");
  Json cases = Json::array();
  for (const KochVerdictCase& c : study.verdicts) {
    add_verdict_row(verdicts, label, c.params, c.verdict, to_string(c.expected), flag(c.matches));
    Json j = verdict_json(c.verdict);
    j["s"] = c.params.s;
    j["p"] = c.params.p;
    j["expected"] = to_string(c.expected);
    j["matches"] = c.matches;
    cases.push_back(std::move(j));
  }
  w.write_csv(verdicts);

  summary["level"] = study.level;
  summary["reference_threshold"] = study.reference_threshold;
  summary["threshold_estimate"] = study.threshold_estimate;
  summary["threshold_ok"] = study.threshold_ok;
  summary["codim_lower"] = dimension_json(study.codims.lower);
  summary["codim_upper"] = dimension_json(study.codims.upper);
  summary["tube_exponent"] = study.tube_exponent;
  summary["tube_fit_r2"] = study.tube.fit.r2;
  summary["plumpness"] = {{"kappa", study.plump.kappa}, {"pass", study.plump.pass}, {"worst_ratio", study.plump.worst_ratio}};
  summary["cutoff_below"] = cutoff_json(study.below);
  summary["cutoff_above"] = cutoff_json(study.above);
  summary["verdicts"] = std::move(cases);
}

void cmd_reduction(const RunConfig& cfg, ArtifactWriter& w, Json& summary) {
  const Domain domain = build_domain(cfg);
  const ScalarField u = build_field(cfg);
  const ScalingFunction phi = build_phi(cfg);
  const SampleConfig scfg = sample_config(cfg);
  ReductionOptions opts;
  if (cfg.eta0 > 0.0) opts.eta0 = cfg.eta0;
  opts.dimA_boundary = cfg.dimA;
  const HardyReductionReport r = hardy_reduction_experiment(domain, u, phi, cfg.R_loc, sobolev_params(cfg), scfg, opts);
  CsvTable t("reduction");
  const std::pair<const char*, const IntegralEstimate*> rows[] = {
      {"I1", &r.I1}, {"I2", &r.I2}, {"I3", &r.I3}, {"norm_p", &r.norm_p}, {"lhs", &r.lhs}};
  for (const auto& [name, e] : rows)
    t.add({r.domain, r.field, r.phi, num(r.s), num(r.p), num(r.M), num(r.R_loc), num(r.eta0), name, num(e->value),
           num(e->std_error), num(e->samples), num(scfg.seed)});
  w.write_csv(t);
  summary["field"] = r.field;
  summary["phi"] = r.phi;
  summary["x0"] = point_json(r.x0);
  summary["M"] = r.M;
  summary["R_loc"] = r.R_loc;
  summary["eta0"] = r.eta0;
  for (const auto& [name, e] : rows) summary[name] = e->value;
  summary["c_witness"] = r.c_witness;
  summary["c_reduction"] = r.c_reduction;
  summary["psi_c_estimate"] = r.psi_c_estimate;
  summary["inclusion_checks"] = r.inclusion_checks;
  summary["inclusion_failures"] = r.inclusion_failures;
  summary["cross_geometry_failures"] = r.cross_geometry_failures;
}

void cmd_scaling(const RunConfig& cfg, ArtifactWriter& w, Json& summary) {
  const ScalingFunction phi = build_phi(cfg);
  CsvTable t("scaling");
  const ScalingCheckReport lower = wlsc_check(phi, cfg.eta, cfg.H);
  const ScalingCheckReport upper = wusc_check(phi, cfg.eta, cfg.H);
  add_scaling_row(t, "wlsc", phi, lower);
  add_scaling_row(t, "wusc", phi, upper);
  summary["phi"] = phi.label();
  summary["wlsc"] = scaling_json(lower);
  summary["wusc"] = scaling_json(upper);
  if (cfg.M > 0.0) {
    const double eta0 = cfg.eta0 > 0.0 ? cfg.eta0 : select_eta0(cfg.eta, cfg.dimA);
    const ScalingFunction psi = psi_extend(phi, cfg.M, eta0);
    const ScalingCheckReport psi_upper = wusc_check(psi, eta0, cfg.H);
    const PsiAsymptoticReport asym = psi_lower_asymptotic_check(psi, cfg.M, cfg.R_loc, eta0);
    add_scaling_row(t, "psi_wusc", psi, psi_upper);
    t.add({"psi_lower_asymptotic", psi.label(), num(eta0), num(cfg.H), flag(asym.pass), num(asym.c_estimate),
           num(asym.witness_z), "", ""});
    summary["eta0"] = eta0;
    summary["psi_wusc"] = scaling_json(psi_upper);
    summary["psi_lower_asymptotic"] = {
        {"pass", asym.pass}, {"c_estimate", asym.c_estimate}, {"witness_z", asym.witness_z}};
  }
  w.write_csv(t);
}

void cmd_validate(const RunConfig& cfg, ArtifactWriter&, Json& summary) {
  summary["violations"] = validate_config(cfg);
}

Command find_command(const std::string& name) {
  static const std::pair<const char*, Command> table[] = {
      {"dimension", cmd_dimension}, {"tube", cmd_tube},       {"seminorm", cmd_seminorm},
      {"hardy", cmd_hardy},         {"density", cmd_density}, {"cutoff", cmd_cutoff},
      {"koch", cmd_koch},           {"reduction", cmd_reduction}, {"scaling", cmd_scaling},
      {"validate", cmd_validate}};
  for (const auto& [key, fn] : table)
    if (name == key) return fn;
  throw ConfigError("unknown command '" + name + "'");
}

bool uses_domain(const std::string& command) { return command != "scaling" && command != "koch"; }
bool uses_field(const std::string& command) {
  return command == "seminorm" || command == "hardy" || command == "reduction";
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "grid") return Method::grid;
  if (name == "montecarlo") return Method::montecarlo;
  throw ConfigError("method must be 'grid' or 'montecarlo', got '" + name + "'");
}

SampleConfig sample_config(const RunConfig& cfg) {
  SampleConfig s;
  s.seed = cfg.seed;
  s.samples = cfg.samples;
  s.grid_h = cfg.grid_h;
  return s;
}

Domain build_domain(const RunConfig& cfg) {
  try {
    if (cfg.domain == "disk") return make_disk(Point::Zero(), cfg.radius);
    if (cfg.domain == "square") return make_unit_square();
    if (cfg.domain == "rectangle") return make_rectangle(Point::Zero(), Point(cfg.width, cfg.height));
    if (cfg.domain == "koch") return koch_prefractal(cfg.level);
    if (cfg.domain == "comb") return make_comb(cfg.teeth);
  } catch (const EstimatorError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown domain '" + cfg.domain + "' (disk, square, rectangle, koch, comb)");
}

ScalarField build_field(const RunConfig& cfg) {
  if (cfg.field == "one") return constant_field(1.0);
  if (cfg.field == "const") return constant_field(cfg.field_a);
  if (cfg.field == "x1") return coordinate_field(0);
  if (cfg.field == "x2") return coordinate_field(1);
  if (cfg.field == "dist_pow") {
    if (!(cfg.field_a > 0.0)) throw ConfigError("dist_pow needs field_a > 0");
    return distance_power_field(cfg.field_a);
  }
  if (cfg.field == "cutoff") {
    if (!(cfg.field_a >= 1.0) || cfg.field_a != std::floor(cfg.field_a))
      throw ConfigError("cutoff field needs a positive integer field_a");
    return cutoff_field(static_cast<int>(cfg.field_a));
  }
  if (cfg.field == "ramp") {
    if (!(cfg.field_a >= 0.0 && cfg.field_b > cfg.field_a)) throw ConfigError("ramp field needs 0 <= field_a < field_b");
    return distance_ramp_field(cfg.field_a, cfg.field_b);
  }
  throw ConfigError("unknown field '" + cfg.field + "' (one, const, x1, x2, dist_pow, cutoff, ramp)");
}

ScalingFunction build_phi(const RunConfig& cfg) {
  ScalingFunction phi = [&] {
    try {
      if (cfg.phi == "power") return ScalingFunction::power(cfg.phi_exponent);
      if (cfg.phi == "tabulated") return ScalingFunction::tabulated(cfg.phi_t, cfg.phi_values);
    } catch (const EstimatorError& e) {
      throw ConfigError(e.what());
    }
    throw ConfigError("unknown scaling function '" + cfg.phi + "' (power, tabulated)");
  }();
  phi.claimed_eta = cfg.eta;
  phi.claimed_H = cfg.H;
  return phi;
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> v;
  auto check = [&](bool ok, std::string msg) {
    if (!ok) v.push_back(std::move(msg));
  };
  auto attempt = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      v.push_back(e.what());
    }
  };
  check(std::find(std::begin(kCommands), std::end(kCommands), cfg.command) != std::end(kCommands),
        "unknown command '" + cfg.command + "'");
  check(cfg.s > 0.0 && cfg.s < 1.0, "order s = " + num(cfg.s) + " outside (0,1)");
  check(cfg.p >= 1.0 && std::isfinite(cfg.p), "integrability p = " + num(cfg.p) + " outside [1,inf)");
  check(cfg.samples > 0, "samples must be positive");
  check(cfg.grid_h >= 0.0, "grid_h must be non-negative");
  attempt([&] { parse_method(cfg.method); });

  const bool koch = cfg.command == "koch" || (uses_domain(cfg.command) && cfg.domain == "koch");
  if (uses_domain(cfg.command) || cfg.command == "validate") attempt([&] { build_domain(cfg); });
  if (koch) check(cfg.level >= 0 && cfg.level <= kMaxKochLevel, "koch level must lie in [0, 10]");
  if (uses_field(cfg.command) || cfg.command == "validate") attempt([&] { build_field(cfg); });
  if (cfg.command == "scaling" || cfg.command == "reduction") attempt([&] { build_phi(cfg); });

  bool increasing = !cfg.n_grid.empty();
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i)
    increasing = increasing && cfg.n_grid[i] >= 1 && (i == 0 || cfg.n_grid[i] > cfg.n_grid[i - 1]);
  check(increasing, "n_grid must be a non-empty strictly increasing list of positive integers");
  if (increasing && koch && cfg.level >= 0) {
    const int n_max = cfg.n_grid.back();
    const double feature = std::pow(3.0, -cfg.level);
    check(feature <= (3.0 / n_max) / 10.0 * (1.0 + 1e-12),
          "resolution rule violated: 3^-level = " + num(feature) + " > (3/n_max)/10 = " + num(0.3 / n_max) +
              " for level " + num(cfg.level) + " and n_max = " + num(n_max));
  }

  check(cfg.r >= 0.0, "tube radius r must be non-negative");
  check(cfg.r_min > 0.0 && cfg.r_max > cfg.r_min, "tube window needs 0 < r_min < r_max");
  check(cfg.scales >= 3, "scales must be at least 3");
  const double r_small = cfg.r > 0.0 ? cfg.r : cfg.r_min;
  if (cfg.grid_h > 0.0)
    check(cfg.grid_h <= r_small / 8.0, "grid cell h = " + num(cfg.grid_h) + " exceeds r/8 = " + num(r_small / 8.0) +
                                           " for the smallest radius r = " + num(r_small));
  check(cfg.centers >= 0, "centers must be non-negative");
  check(cfg.kappa > 0.0 && cfg.kappa < 1.0, "plumpness kappa must lie in (0,1)");
  check(cfg.R_loc > 0.0 && cfg.R_loc <= kReductionClipFactor - 1.0, "R_loc must lie in (0, 7]");
  check(cfg.M >= 0.0, "M must be non-negative");
  check(cfg.H > 0.0 && cfg.H <= 1.0, "H must lie in (0,1]");
  check(cfg.dimA < kAmbientDim, "dimA must be below the ambient dimension 2");
  return v;
}

std::filesystem::path run_directory(const RunConfig& cfg) {
  return std::filesystem::path(cfg.output_dir) / (cfg.command + "_seed" + std::to_string(cfg.seed));
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Command command = find_command(cfg.command);
    if (cfg.command != "validate") {
      const std::vector<std::string> violations = validate_config(cfg);
      if (!violations.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& s : violations) msg += "\n  " + s;
        throw ConfigError(msg);
      }
    }
    ArtifactWriter writer(run_directory(cfg));
    Json summary;
    summary["command"] = cfg.command;
    summary["seed"] = cfg.seed;
    summary["samples"] = cfg.samples;
    if (uses_domain(cfg.command) && cfg.command != "validate") summary["domain"] = build_domain(cfg).label();
    command(cfg, writer, summary);
    writer.write_text("run.cfg", serialize_config(cfg));
    writer.write_json("summary.json", summary);
    writer.finish();
    if (cfg.command == "validate") {
      const auto& violations = summary["violations"];
      if (violations.empty()) out << "config is valid\n";
      for (const auto& s : violations) out << "violation: " << s.get<std::string>() << "\n";
    }
    out << "artifacts written to " << writer.dir().string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const EstimatorError& e) {
    err << "estimator error: " << e.what() << "\n";
    return kExitEstimatorError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace fraclab
