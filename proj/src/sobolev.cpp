#include "fraclab/sobolev.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fraclab/fit.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/random.hpp"

namespace fraclab {

namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

Point uniform_in(const Box& box, const CounterRng& rng, std::uint64_t i) {
  return box.lo + box.extent().cwiseProduct(Point(rng.uniform(i, 0), rng.uniform(i, 1)));
}

double domain_area_bound(const Domain& domain) {
  return domain.area_exact().value_or(domain.bbox().area());
}

double require_finite(double v, const ScalarField& f) {
  if (!std::isfinite(v)) throw EstimatorError("field " + f.label() + " produced a nonfinite value");
  return v;
}

/// Analytic bound on the pairs with |x - y| < rho from the Hoelder modulus.
double near_diagonal_bound(const ScalarField& f, const Domain& domain, const SobolevParams& params, double rho) {
  const auto& mod = f.modulus();
  if (!mod) return kInf;
  if (mod->L == 0.0) return 0.0;
  const double gap = mod->alpha * params.p - params.sp();
  if (!(gap > 0.0)) return kInf;
  return domain_area_bound(domain) * 2.0 * pi * std::pow(mod->L, params.p) * std::pow(rho, gap) / gap;
}

/// Cells of a square grid over the bounding box whose centres lie in the
/// domain (and in {d <= cap} when given).
struct GridPoints {
  std::vector<Point> x;
  std::vector<double> d;
  double h = 0.0;
};

GridPoints grid_points(const Domain& domain, int cells, std::optional<double> cap) {
  if (cells < 2) throw ConfigError("grid needs at least 2 cells per side");
  const Box& box = domain.bbox();
  GridPoints out;
  out.h = box.extent().maxCoeff() / cells;
  const auto nx = static_cast<std::int64_t>(std::ceil(box.extent().x() / out.h));
  const auto ny = static_cast<std::int64_t>(std::ceil(box.extent().y() / out.h));
  for (std::int64_t j = 0; j < ny; ++j) {
    for (std::int64_t i = 0; i < nx; ++i) {
      const Point c = box.lo + out.h * Point(static_cast<double>(i) + 0.5, static_cast<double>(j) + 0.5);
      const BoundaryQuery q = domain.query(c);
      if (!q.inside || (cap && q.distance > *cap)) continue;
      out.x.push_back(c);
      out.d.push_back(q.distance);
    }
  }
  return out;
}

/// Midpoint rule over distinct cell pairs.
double grid_seminorm(const ScalarField& f, const Domain& domain, const SobolevParams& params, int cells,
                     std::optional<double> cap) {
  const GridPoints g = grid_points(domain, cells, cap);
  std::vector<double> fx(g.x.size());
  for (std::size_t i = 0; i < g.x.size(); ++i) fx[i] = require_finite(f(g.x[i], g.d[i]), f);
  const double p = params.p;
  const double half_exponent = -0.5 * (2.0 + params.sp());
  std::vector<double> rows(g.x.size(), 0.0);
  parallel_for(g.x.size(), [&](std::size_t i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < g.x.size(); ++j) {
      const double diff = std::abs(fx[i] - fx[j]);
      if (diff == 0.0) continue;
      row += std::pow(diff, p) * std::pow((g.x[i] - g.x[j]).squaredNorm(), half_exponent);
    }
    rows[i] = row;
  });
  double total = 0.0;
  for (double row : rows) total += row;
  const double cell = g.h * g.h;
  return 2.0 * total * cell * cell;
}

}  // namespace

void SobolevParams::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("s must lie in (0, 1), got " + number(s));
  if (!(p >= 1.0 && std::isfinite(p))) throw ConfigError("p must lie in [1, inf), got " + number(p));
}

ScalarField::ScalarField(std::string label, Evaluator f, Traits traits)
    : label_(std::move(label)), f_(std::make_shared<const Evaluator>(std::move(f))), traits_(traits) {}

ScalarField constant_field(double c) {
  return ScalarField(number(c), [c](const Point&, double) { return c; },
                     {std::abs(c), HolderModulus{0.0, 1.0}});
}

ScalarField coordinate_field(int axis) {
  if (axis != 0 && axis != 1) throw ConfigError("coordinate axis must be 0 or 1");
  return ScalarField(axis == 0 ? "x1" : "x2", [axis](const Point& x, double) { return x(axis); },
                     {std::nullopt, HolderModulus{1.0, 1.0}});
}

ScalarField distance_power_field(double beta) {
  if (!(beta > 0.0)) throw ConfigError("distance power must be positive");
  ScalarField::Traits traits;
  if (beta <= 1.0) traits.modulus = HolderModulus{1.0, beta};
  return ScalarField("d^" + number(beta), [beta](const Point&, double d) { return std::pow(d, beta); }, traits);
}

ScalarField cutoff_field(int n) {
  if (n < 1) throw ConfigError("cutoff index n must be at least 1");
  return ScalarField("v" + std::to_string(n), [n](const Point&, double d) { return cutoff_vn(n, d); },
                     {1.0, HolderModulus{static_cast<double>(n), 1.0}});
}

ScalarField distance_ramp_field(double a, double b) {
  if (!(a >= 0.0 && b > a)) throw ConfigError("distance ramp needs 0 <= a < b");
  return ScalarField("ramp[" + number(a) + "," + number(b) + "]",
                     [a, b](const Point&, double d) { return std::clamp((d - a) / (b - a), 0.0, 1.0); },
                     {1.0, HolderModulus{1.0 / (b - a), 1.0}});
}

ScalarField scaled(double c, const ScalarField& f) {
  ScalarField::Traits traits = f.traits();
  if (traits.known_bound) *traits.known_bound *= std::abs(c);
  if (traits.modulus) traits.modulus->L *= std::abs(c);
  return ScalarField(number(c) + "*" + f.label(), [c, f](const Point& x, double d) { return c * f(x, d); }, traits);
}

ScalarField sum(const ScalarField& f, const ScalarField& g) {
  ScalarField::Traits traits;
  if (f.known_bound() && g.known_bound()) traits.known_bound = *f.known_bound() + *g.known_bound();
  const auto& mf = f.modulus();
  const auto& mg = g.modulus();
  if (mf && mg && (mf->alpha == mg->alpha || mf->L == 0.0 || mg->L == 0.0))
    traits.modulus = HolderModulus{mf->L + mg->L, mf->L == 0.0 ? mg->alpha : mf->alpha};
  return ScalarField("(" + f.label() + "+" + g.label() + ")",
                     [f, g](const Point& x, double d) { return f(x, d) + g(x, d); }, traits);
}

ScalarField product(const ScalarField& f, const ScalarField& g) {
  ScalarField::Traits traits;
  const auto& bf = f.known_bound();
  const auto& bg = g.known_bound();
  if (bf && bg) traits.known_bound = *bf * *bg;
  const auto& mf = f.modulus();
  const auto& mg = g.modulus();
  // |fg(x) - fg(y)| <= |f| |g(x) - g(y)| + |g| |f(x) - f(y)|.
  if (bf && bg && mf && mg && (mf->alpha == mg->alpha || mf->L == 0.0 || mg->L == 0.0))
    traits.modulus = HolderModulus{*bf * mg->L + *bg * mf->L, mf->L == 0.0 ? mg->alpha : mf->alpha};
  return ScalarField(f.label() + "*" + g.label(), [f, g](const Point& x, double d) { return f(x, d) * g(x, d); },
                     traits);
}

ScalarField truncate_clip(const ScalarField& f, double N) {
  if (!(N > 0.0)) throw ConfigError("truncation level N must be positive");
  ScalarField::Traits traits = f.traits();
  traits.known_bound = traits.known_bound ? std::min(*traits.known_bound, N) : N;
  return ScalarField("trunc" + number(N) + "(" + f.label() + ")",
                     [f, N](const Point& x, double d) { return std::min(std::max(f(x, d), -N), N); }, traits);
}

ScalarField clip01(const ScalarField& g) {
  ScalarField::Traits traits = g.traits();
  traits.known_bound = 1.0;
  return ScalarField("clip01(" + g.label() + ")",
                     [g](const Point& x, double d) { return std::max(std::min(g(x, d), 1.0), 0.0); }, traits);
}

IntegralEstimate lp_norm_p(const ScalarField& f, const Domain& domain, double p, const SampleConfig& cfg,
                           Method method) {
  if (!(p >= 1.0 && std::isfinite(p))) throw ConfigError("p must lie in [1, inf), got " + number(p));
  IntegralEstimate out;
  if (method == Method::grid) {
    const int cells = static_cast<int>(std::max(16.0, std::sqrt(static_cast<double>(cfg.samples))));
    const GridPoints g = grid_points(domain, cells, std::nullopt);
    double total = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) total += std::pow(std::abs(require_finite(f(g.x[i], g.d[i]), f)), p);
    out.value = total * g.h * g.h;
    out.samples = g.x.size();
    return out;
  }
  const CounterRng rng(derive_seed(cfg.seed, "lp_norm"));
  const Box& box = domain.bbox();
  const double area = box.area();
  const MeanAccumulator acc = sample_mean(cfg.samples, [&](std::uint64_t i) {
    const Point x = uniform_in(box, rng, i);
    const BoundaryQuery q = domain.query(x);
    if (!q.inside) return 0.0;
    return area * std::pow(std::abs(require_finite(f(x, q.distance), f)), p);
  });
  out.value = acc.mean();
  out.std_error = acc.standard_error();
  out.samples = cfg.samples;
  return out;
}

SeminormEstimate gagliardo_seminorm_p(const ScalarField& f, const Domain& domain, const SobolevParams& params,
                                      const SampleConfig& cfg, const SeminormOptions& opts) {
  params.validate();
  const double diam = domain.diameter();
  const double rho_min = opts.rho_min_factor * diam;
  if (!(rho_min > 0.0) || rho_min >= diam) throw EstimatorError("rho_min must lie in (0, diam)");

  SeminormEstimate out;
  out.domain = domain.label();
  out.field = f.label();
  out.s = params.s;
  out.p = params.p;
  out.method = opts.method;
  out.rho_min = rho_min;
  out.seed = cfg.seed;
  const double p = params.p;
  const double sp = params.sp();

  if (opts.method == Method::grid) {
    if (opts.grid_cells < 4 || opts.grid_cells % 2) throw ConfigError("seminorm grid needs an even cell count >= 4");
    // The midpoint rule drops each cell's self pairs, an O(h) deficit that one
    // Richardson step against the half-resolution grid removes.
    const double fine = grid_seminorm(f, domain, params, opts.grid_cells, opts.region_depth);
    const double coarse = grid_seminorm(f, domain, params, opts.grid_cells / 2, opts.region_depth);
    const double h = domain.bbox().extent().maxCoeff() / opts.grid_cells;
    out.value_p = std::max(0.0, 2.0 * fine - coarse);
    out.std_error = std::abs(fine - coarse);
    out.samples = 0;
    out.rho_min = h;
    out.bias_bound = near_diagonal_bound(f, domain, params, std::sqrt(2.0) * h);
    return out;
  }

  out.samples = cfg.samples;
  out.bias_bound = near_diagonal_bound(f, domain, params, rho_min);
  const CounterRng rng(derive_seed(cfg.seed, "gagliardo"));
  const Box& box = domain.bbox();
  const double box_area = box.area();
  const double log_span = std::log(diam / rho_min);
  const double radial = 2.0 * pi * log_span;
  const MeanAccumulator acc = sample_mean(cfg.samples, [&](std::uint64_t i) {
    const Point x = uniform_in(box, rng, i);
    const BoundaryQuery qx = domain.query(x);
    if (!qx.inside || (opts.region_depth && qx.distance > *opts.region_depth)) return 0.0;
    const double rho = rho_min * std::exp(log_span * rng.uniform(i, 2));
    const double theta = 2.0 * pi * rng.uniform(i, 3);
    const Point y = x + rho * Point(std::cos(theta), std::sin(theta));
    const BoundaryQuery qy = domain.query(y);
    if (!qy.inside || (opts.region_depth && qy.distance > *opts.region_depth)) return 0.0;
    const double diff = std::abs(require_finite(f(x, qx.distance), f) - require_finite(f(y, qy.distance), f));
    if (diff == 0.0) return 0.0;
    return box_area * radial * std::pow(rho, -sp) * std::pow(diff, p);
  });
  out.value_p = acc.mean();
  out.std_error = acc.standard_error();
  return out;
}

Lemma1Report lemma1_check(const ScalarField& f, const Domain& domain, const SobolevParams& params, int n,
                          const SampleConfig& cfg) {
  params.validate();
  if (n < 1) throw ConfigError("cutoff index n must be at least 1");
  const double r = 3.0 / n;
  if (!(r < domain.diameter())) throw EstimatorError("cutoff bound needs 3/n below the diameter");

  Lemma1Report out;
  out.n = n;
  const SeminormEstimate lhs = gagliardo_seminorm_p(product(f, cutoff_field(n)), domain, params, cfg);
  out.lhs = lhs.value_p;
  out.lhs_std_error = lhs.std_error;

  // Mass of |f|^p on the tube {d <= 3/n}.
  const CounterRng rng(derive_seed(cfg.seed, "lemma1_mass"));
  const Box& box = domain.bbox();
  const double area = box.area();
  struct Acc {
    MeanAccumulator mass;
    MeanAccumulator volume;
    void merge(const Acc& o) {
      mass.merge(o.mass);
      volume.merge(o.volume);
    }
  };
  const Acc acc = accumulate_blocks<Acc>(cfg.samples, [&](std::uint64_t begin, std::uint64_t end) {
    Acc a;
    for (std::uint64_t i = begin; i < end; ++i) {
      const Point x = uniform_in(box, rng, i);
      const BoundaryQuery q = domain.query(x);
      const bool in_tube = q.inside && q.distance <= r;
      a.mass.add(in_tube ? area * std::pow(std::abs(require_finite(f(x, q.distance), f)), params.p) : 0.0);
      a.volume.add(in_tube ? area : 0.0);
    }
    return a;
  });
  out.tube_volume = acc.volume.mean();
  if (!(out.tube_volume > 0.0)) throw EstimatorError("inner tube of radius 3/n has measured volume 0");
  out.term_mass = std::pow(static_cast<double>(n), params.sp()) * acc.mass.mean();

  SeminormOptions region;
  region.region_depth = r;
  out.term_semi = gagliardo_seminorm_p(f, domain, params, cfg, region).value_p;
  const double denom = out.term_mass + out.term_semi;
  out.implied_C = out.lhs == 0.0 ? 0.0 : (denom > 0.0 ? out.lhs / denom : kInf);
  return out;
}

Point deepest_point(const Domain& domain) {
  constexpr int kCells = 256;
  const Box& box = domain.bbox();
  const double h = box.extent().maxCoeff() / kCells;
  struct RowBest {
    double d = -1.0;
    Point x = Point::Zero();
  };
  std::vector<RowBest> best(kCells);
  parallel_for(kCells, [&](std::size_t j) {
    RowBest m;
    for (int i = 0; i < kCells; ++i) {
      const Point c = box.lo + h * Point(i + 0.5, static_cast<double>(j) + 0.5);
      if (c.y() > box.hi.y() || c.x() > box.hi.x()) continue;
      const BoundaryQuery q = domain.query(c);
      if (q.inside && q.distance > m.d) m = {q.distance, c};
    }
    best[j] = m;
  });
  RowBest top;
  for (const RowBest& row : best)
    if (row.d > top.d) top = row;
  if (top.d < 0.0) throw EstimatorError("domain " + domain.label() + " has no interior grid point");
  return top.x;
}

double inradius_estimate(const Domain& domain) {
  return domain.dist_boundary(deepest_point(domain));
}

HardyQuotient hardy_quotient(const ScalarField& f, const Domain& domain, const SobolevParams& params,
                             const SampleConfig& cfg) {
  params.validate();
  HardyQuotient out;
  out.domain = domain.label();
  out.field = f.label();
  out.s = params.s;
  out.p = params.p;
  out.seed = cfg.seed;
  out.delta0 = inradius_estimate(domain);
  const double p = params.p;
  const double sp = params.sp();
  auto integrand = [&](const Point& x, double d) {
    return std::pow(std::abs(require_finite(f(x, d), f)), p) * std::pow(d, -sp);
  };

  const std::uint64_t seed = derive_seed(cfg.seed, "hardy");
  const Box& box = domain.bbox();
  const double box_area = box.area();
  out.shells.resize(kHardyShells);
  for (int k = 0; k < kHardyShells; ++k) {
    out.shells[static_cast<std::size_t>(k)].outer = std::ldexp(out.delta0, -k);
    out.shells[static_cast<std::size_t>(k)].inner = std::ldexp(out.delta0, -k - 1);
  }
  double variance = 0.0;

  // Uniform draws over the bounding box, binned by shell; the last bin is the core.
  struct Bins {
    std::vector<MeanAccumulator> bins = std::vector<MeanAccumulator>(kHardyShells + 1);
    void merge(const Bins& o) {
      for (std::size_t b = 0; b < bins.size(); ++b) bins[b].merge(o.bins[b]);
    }
  };
  auto shell_of = [&](const BoundaryQuery& q) {
    if (!q.inside || !(q.distance > 0.0)) return -1;
    if (q.distance > out.delta0) return kHardyShells;
    const int k = static_cast<int>(std::floor(-std::log2(q.distance / out.delta0)));
    return k < kHardyShells ? std::max(k, 0) : -1;
  };
  auto uniform_pass = [&](std::uint64_t n, const CounterRng& rng, bool evaluate) {
    return accumulate_blocks<Bins>(n, [&](std::uint64_t begin, std::uint64_t end) {
      Bins a;
      for (std::uint64_t i = begin; i < end; ++i) {
        const Point x = uniform_in(box, rng, i);
        const BoundaryQuery q = domain.query(x);
        const int bin = shell_of(q);
        for (int b = 0; b <= kHardyShells; ++b) {
          const double v = b != bin ? 0.0 : (evaluate ? box_area * integrand(x, q.distance) : 1.0);
          a.bins[static_cast<std::size_t>(b)].add(v);
        }
      }
      return a;
    });
  };

  // A pilot pass on its own stream picks the sampler per shell: shells that
  // uniform draws hit often enough are binned, thin shells use the boundary
  // feature sampler. The choice is independent of the main estimates.
  std::vector<bool> use_feature(kHardyShells, false);
  int feature_shells = 0;
  if (domain.has_shell_sampler()) {
    const Bins pilot = uniform_pass(kHardyPilotSamples, CounterRng(seed, kHardyShells + 1), false);
    for (int k = 0; k < kHardyShells; ++k) {
      const double hits = pilot.bins[static_cast<std::size_t>(k)].mean() * kHardyPilotSamples;
      use_feature[static_cast<std::size_t>(k)] = hits < kHardyPilotHits;
      feature_shells += use_feature[static_cast<std::size_t>(k)] ? 1 : 0;
    }
  }
  const std::uint64_t uniform_samples = feature_shells > 0 ? std::max<std::uint64_t>(cfg.samples / 2, 1024)
                                                           : cfg.samples;
  const std::uint64_t per =
      feature_shells > 0 ? std::max<std::uint64_t>((cfg.samples - uniform_samples) / feature_shells, 1024) : 0;

  const Bins uniform = uniform_pass(uniform_samples, CounterRng(seed, 0), true);
  out.core = uniform.bins.back().mean();
  variance += square(uniform.bins.back().standard_error());
  for (int k = 0; k < kHardyShells; ++k) {
    HardyShell& shell = out.shells[static_cast<std::size_t>(k)];
    if (use_feature[static_cast<std::size_t>(k)]) {
      const CounterRng rng(seed, static_cast<std::uint64_t>(k) + 1);
      const MeanAccumulator acc = sample_mean(per, [&](std::uint64_t i) {
        const ShellSample sx = domain.inner_shell_sample(shell.inner, shell.outer, rng.uniform(i, 0), rng.uniform(i, 1));
        if (sx.weight == 0.0) return 0.0;
        return sx.weight * integrand(sx.x, domain.dist_boundary(sx.x));
      });
      shell.contribution = acc.mean();
      shell.std_error = acc.standard_error();
    } else {
      shell.contribution = uniform.bins[static_cast<std::size_t>(k)].mean();
      shell.std_error = uniform.bins[static_cast<std::size_t>(k)].standard_error();
    }
    variance += square(shell.std_error);
  }
  out.samples = uniform_samples + per * static_cast<std::uint64_t>(feature_shells);

  out.value = out.core;
  for (const HardyShell& shell : out.shells) out.value += shell.contribution;
  out.std_error = std::sqrt(variance);

  std::vector<double> ks;
  std::vector<double> logs;
  for (int k = kHardyShells - kHardyTailShells; k < kHardyShells; ++k) {
    const double c = out.shells[static_cast<std::size_t>(k)].contribution;
    if (c > 0.0) {
      ks.push_back(k);
      logs.push_back(std::log2(c));
    }
  }
  out.tail_slope = ks.size() >= 2 ? fit_line(ks, logs).slope : -kInf;
  out.diverged = out.tail_slope > kHardyDivergenceSlope;
  return out;
}

IntegralEstimate hardy_rhs_localized(const ScalarField& u, const Domain& domain, const ScalingFunction& phi,
                                     double R_loc, double p, const SampleConfig& cfg) {
  if (!(R_loc > 0.0)) throw ConfigError("localization factor R must be positive");
  if (!(p >= 1.0 && std::isfinite(p))) throw ConfigError("p must lie in [1, inf), got " + number(p));
  const CounterRng rng(derive_seed(cfg.seed, "hardy_rhs"));
  const Box& box = domain.bbox();
  const double box_area = box.area();
  const MeanAccumulator acc = sample_mean(cfg.samples, [&](std::uint64_t i) {
    const Point x = uniform_in(box, rng, i);
    const BoundaryQuery qx = domain.query(x);
    if (!qx.inside || qx.distance == 0.0) return 0.0;
    const double d = qx.distance;
    const double phi_d = phi(d);
    if (!(phi_d > 0.0)) throw EstimatorError("phi is not positive at t = " + number(d));
    const double radius = R_loc * d;
    const double rho = radius * std::sqrt(rng.uniform(i, 2));
    const double theta = 2.0 * pi * rng.uniform(i, 3);
    const Point y = x + rho * Point(std::cos(theta), std::sin(theta));
    const BoundaryQuery qy = domain.query(y);
    if (!qy.inside) return 0.0;
    const double diff = std::abs(require_finite(u(x, d), u) - require_finite(u(y, qy.distance), u));
    if (diff == 0.0) return 0.0;
    return box_area * pi * radius * radius * std::pow(diff, p) / (phi_d * d * d);
  });
  IntegralEstimate out;
  out.value = acc.mean();
  out.std_error = acc.standard_error();
  out.samples = cfg.samples;
  return out;
}

}  // namespace fraclab
