#include "fraclab/tube.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclab/grid_count.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/random.hpp"

namespace fraclab {

namespace {

using std::numbers::pi;

CellGrid grid_over(const Box& box, double h) {
  CellGrid grid;
  grid.origin = box.lo;
  grid.h = h;
  grid.nx = static_cast<std::int64_t>(std::ceil(box.extent().x() / h));
  grid.ny = static_cast<std::int64_t>(std::ceil(box.extent().y() / h));
  if (grid.cell_count() > kMaxGridCells) {
    std::ostringstream msg;
    msg << "resolution infeasible: grid of " << grid.cell_count() << " cells at h = " << h
        << " exceeds the cap of " << kMaxGridCells << " cells";
    throw EstimatorError(msg.str());
  }
  return grid;
}

void require_positive_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw EstimatorError("tube radius r must be positive and finite");
}

TubeMeasurement base_measurement(const Domain& domain, double r, double R, const SampleConfig& cfg, Method m) {
  TubeMeasurement out;
  out.domain = domain.label();
  out.r = r;
  out.R = R;
  out.method = m;
  out.seed = cfg.seed;
  return out;
}

/// Cover of {y : d(y) <= r} restricted further by `inside` when required.
Cover tube_cover(const BoundaryQuery& q, double r, double radius, bool need_inside) {
  const double d = q.distance;
  if (d > r + radius) return Cover::none;
  if (radius == 0.0) return (!need_inside || q.inside) ? Cover::all : Cover::none;
  if (d > radius) {
    // No boundary crosses the block, so membership of Omega is constant on it.
    if (need_inside && !q.inside) return Cover::none;
    if (d + radius <= r) return Cover::all;
  }
  return Cover::mixed;
}

Cover ball_cover(const Point& c, const Point& x, double R, double radius) {
  const double rho = (c - x).norm();
  if (rho > R + radius) return Cover::none;
  if (rho + radius <= R) return Cover::all;
  return radius == 0.0 ? Cover::none : Cover::mixed;
}

Cover intersect(Cover a, Cover b) {
  if (a == Cover::none || b == Cover::none) return Cover::none;
  if (a == Cover::all && b == Cover::all) return Cover::all;
  return Cover::mixed;
}

}  // namespace

double tube_grid_h(double r, const SampleConfig& cfg) {
  require_positive_radius(r);
  if (cfg.grid_h > 0.0) {
    if (cfg.grid_h > r / 8.0 * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "resolution infeasible: grid_h = " << cfg.grid_h << " exceeds r/8 = " << r / 8.0;
      throw EstimatorError(msg.str());
    }
    return cfg.grid_h;
  }
  if (cfg.cells_per_r < 8.0) throw EstimatorError("cells_per_r must be at least 8");
  return r / cfg.cells_per_r;
}

TubeMeasurement inner_tube_volume(const Domain& domain, double r, const SampleConfig& cfg, Method method) {
  require_positive_radius(r);
  TubeMeasurement out = base_measurement(domain, r, 0.0, cfg, method);
  const Box& box = domain.bbox();
  if (method == Method::grid) {
    const CellGrid grid = grid_over(box, tube_grid_h(r, cfg));
    const std::uint64_t cells = count_cells(grid, [&](const Point& c, double radius) {
      return tube_cover(domain.query(c), r, radius, true);
    });
    out.volume = static_cast<double>(cells) * grid.cell_area();
    out.samples = static_cast<std::uint64_t>(grid.cell_count());
    out.grid_h = grid.h;
    return out;
  }
  const CounterRng rng(derive_seed(cfg.seed, "inner_tube"));
  const double area = box.area();
  const MeanAccumulator acc = sample_mean(cfg.samples, [&](std::uint64_t i) {
    const Point x = box.lo + box.extent().cwiseProduct(Point(rng.uniform(i, 0), rng.uniform(i, 1)));
    const BoundaryQuery q = domain.query(x);
    return (q.inside && q.distance <= r) ? area : 0.0;
  });
  out.volume = acc.mean();
  out.std_error = acc.standard_error();
  out.samples = cfg.samples;
  return out;
}

TubeMeasurement boundary_tube_volume(const Domain& domain, double r, const SampleConfig& cfg, Method method) {
  require_positive_radius(r);
  TubeMeasurement out = base_measurement(domain, r, 0.0, cfg, method);
  const Box box = domain.bbox().inflated(r);
  if (method == Method::grid) {
    const CellGrid grid = grid_over(box, tube_grid_h(r, cfg));
    const std::uint64_t cells = count_cells(grid, [&](const Point& c, double radius) {
      return tube_cover(domain.query(c), r, radius, false);
    });
    out.volume = static_cast<double>(cells) * grid.cell_area();
    out.samples = static_cast<std::uint64_t>(grid.cell_count());
    out.grid_h = grid.h;
    return out;
  }
  const CounterRng rng(derive_seed(cfg.seed, "boundary_tube"));
  const double area = box.area();
  const MeanAccumulator acc = sample_mean(cfg.samples, [&](std::uint64_t i) {
    const Point x = box.lo + box.extent().cwiseProduct(Point(rng.uniform(i, 0), rng.uniform(i, 1)));
    return domain.dist_boundary(x) <= r ? area : 0.0;
  });
  out.volume = acc.mean();
  out.std_error = acc.standard_error();
  out.samples = cfg.samples;
  return out;
}

TubeMeasurement tube_in_ball(const Domain& domain, const Point& x, double r, double lambda, const SampleConfig& cfg,
                             Method method) {
  require_positive_radius(r);
  if (!(lambda > 0.0)) throw EstimatorError("ball radius factor must be positive");
  const double R = lambda * r;
  TubeMeasurement out = base_measurement(domain, r, R, cfg, method);
  out.center = x;
  if (method == Method::grid) {
    const double h = tube_grid_h(r, cfg);
    const Box box{(x.array() - R).matrix(), (x.array() + R).matrix()};
    const CellGrid grid = grid_over(box, h);
    const std::uint64_t cells = count_cells(grid, [&](const Point& c, double radius) {
      const Cover ball = ball_cover(c, x, R, radius);
      if (ball == Cover::none) return Cover::none;
      return intersect(ball, tube_cover(domain.query(c), r, radius, false));
    });
    out.volume = static_cast<double>(cells) * grid.cell_area();
    out.samples = static_cast<std::uint64_t>(grid.cell_count());
    out.grid_h = grid.h;
    return out;
  }
  const CounterRng rng(derive_seed(cfg.seed, "tube_in_ball"),
                       mix64(std::bit_cast<std::uint64_t>(x.x())) ^ std::bit_cast<std::uint64_t>(x.y()) ^
                           mix64(std::bit_cast<std::uint64_t>(R)));
  const double area = pi * R * R;
  const MeanAccumulator acc = sample_mean(cfg.samples, [&](std::uint64_t i) {
    const double rho = R * std::sqrt(rng.uniform(i, 0));
    const double theta = 2.0 * pi * rng.uniform(i, 1);
    const Point y = x + rho * Point(std::cos(theta), std::sin(theta));
    return domain.dist_boundary(y) <= r ? area : 0.0;
  });
  out.volume = acc.mean();
  out.std_error = acc.standard_error();
  out.samples = cfg.samples;
  return out;
}

TubeMeasurement boundary_tube_ball_volume(const Domain& domain, const Point& x, double r, double R,
                                          const SampleConfig& cfg, Method method) {
  if (!(r > 0.0 && r < R && R < domain.diameter())) {
    std::ostringstream msg;
    msg << "scale ordering violated: need 0 < r < R < diam, got r = " << r << ", R = " << R
        << ", diam = " << domain.diameter();
    throw EstimatorError(msg.str());
  }
  if (domain.dist_boundary(x) > kBoundarySnap * domain.diameter())
    throw EstimatorError("ball centre is not on the boundary");
  return tube_in_ball(domain, x, r, R / r, cfg, method);
}

}  // namespace fraclab
