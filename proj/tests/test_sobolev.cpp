#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fraclab/random.hpp"
#include "fraclab/sobolev.hpp"

namespace fraclab {
namespace {

constexpr double kPi = std::numbers::pi;
// [x1]^p on the unit square at s = 0.5, p = 2 from a refined tensor grid.
constexpr double kX1SquareOracle = 1.48660479912369;

SampleConfig small(std::uint64_t samples = 1 << 18, std::uint64_t seed = 1) {
  SampleConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;
  return cfg;
}

TEST(Params, Validation) {
  EXPECT_NO_THROW((SobolevParams{0.5, 2.0}.validate()));
  EXPECT_THROW((SobolevParams{1.2, 2.0}.validate()), ConfigError);
  EXPECT_THROW((SobolevParams{0.0, 2.0}.validate()), ConfigError);
  EXPECT_THROW((SobolevParams{0.5, 0.5}.validate()), ConfigError);
  EXPECT_DOUBLE_EQ((SobolevParams{0.3, 2.0}.sp()), 0.6);
}

TEST(Cutoff, Examples) {
  EXPECT_EQ(cutoff_vn(10, 0.05), 1.0);
  EXPECT_DOUBLE_EQ(cutoff_vn(10, 0.15), 0.5);
  EXPECT_EQ(cutoff_vn(10, 0.25), 0.0);
  EXPECT_EQ(cutoff_vn(10, 0.0), 1.0);
}

TEST(Cutoff, ModulusOnRandomPairs) {
  const Domain koch = koch_prefractal(4);
  const CounterRng rng(3);
  for (int n : {4, 16, 64}) {
    const ScalarField v = cutoff_field(n);
    for (std::uint64_t i = 0; i < 200000; ++i) {
      const Point x(rng.uniform(i, 0), rng.uniform(i, 1) - 0.3);
      const Point y = x + 0.2 * Point(rng.uniform(i, 2) - 0.5, rng.uniform(i, 3) - 0.5);
      const double lhs = std::abs(v.at(koch, x) - v.at(koch, y));
      ASSERT_LE(lhs, std::min(1.0, n * (x - y).norm()) * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST(Fields, ClipAndTruncateExamples) {
  const Point x = Point::Zero();
  EXPECT_EQ(truncate_clip(constant_field(5.0), 2.0)(x, 1.0), 2.0);
  EXPECT_EQ(truncate_clip(constant_field(-5.0), 2.0)(x, 1.0), -2.0);
  EXPECT_EQ(clip01(constant_field(-0.3))(x, 1.0), 0.0);
  EXPECT_EQ(clip01(constant_field(0.7))(x, 1.0), 0.7);
  EXPECT_EQ(clip01(constant_field(1.4))(x, 1.0), 1.0);
}

TEST(Fields, FiniteOnInteriorSamples) {
  const Domain disk = make_disk();
  const CounterRng rng(5);
  const ScalarField fields[] = {coordinate_field(0), distance_power_field(0.5), cutoff_field(8),
                                distance_ramp_field(0.1, 0.2), product(coordinate_field(1), cutoff_field(4))};
  for (const ScalarField& f : fields) {
    for (std::uint64_t i = 0; i < 100000; ++i) {
      const Point x(2 * rng.uniform(i, 0) - 1, 2 * rng.uniform(i, 1) - 1);
      if (disk.inside(x)) {
        ASSERT_TRUE(std::isfinite(f.at(disk, x))) << f.label();
      }
    }
  }
}

TEST(LpNorm, Examples) {
  const IntegralEstimate area = lp_norm_p(constant_field(1.0), make_disk(), 2.0, small(), Method::grid);
  EXPECT_NEAR(area.value, kPi, 0.005 * kPi);
  EXPECT_EQ(lp_norm_p(constant_field(0.0), make_disk(), 2.0, small()).value, 0.0);
  const IntegralEstimate x1 = lp_norm_p(coordinate_field(0), make_unit_square(), 2.0, small());
  EXPECT_NEAR(x1.value, 1.0 / 3.0, 0.005 / 3.0);
}

TEST(Seminorm, ConstantIsExactlyZero) {
  for (Method m : {Method::montecarlo, Method::grid}) {
    SeminormOptions opts;
    opts.method = m;
    const SeminormEstimate e = gagliardo_seminorm_p(constant_field(3.0), koch_prefractal(4), {0.5, 2}, small(), opts);
    EXPECT_EQ(e.value_p, 0.0);
    EXPECT_EQ(e.std_error, 0.0);
    EXPECT_EQ(e.bias_bound, 0.0);
  }
}

TEST(Seminorm, MonteCarloMatchesGridOracle) {
  const SeminormEstimate e = gagliardo_seminorm_p(coordinate_field(0), make_unit_square(), {0.5, 2}, small(1 << 19));
  EXPECT_GT(e.std_error, 0.0);
  EXPECT_NEAR(e.value_p, kX1SquareOracle, 3.0 * e.std_error);
  EXPECT_NEAR(e.value_p, kX1SquareOracle, 0.02 * kX1SquareOracle);
}

TEST(Seminorm, GridMethodReproducesOracle) {
  SeminormOptions opts;
  opts.method = Method::grid;
  const SeminormEstimate e = gagliardo_seminorm_p(coordinate_field(0), make_unit_square(), {0.5, 2}, {}, opts);
  EXPECT_NEAR(e.value_p, kX1SquareOracle, 0.002 * kX1SquareOracle);
}

TEST(Seminorm, HomogeneityIsBitExact) {
  const Domain koch = koch_prefractal(4);
  const ScalarField f = distance_power_field(0.5);
  const SobolevParams params{0.4, 2.0};
  const double base = gagliardo_seminorm_p(f, koch, params, small()).value_p;
  for (double c : {2.0, -4.0, 0.5}) {
    const double scaled_value = gagliardo_seminorm_p(scaled(c, f), koch, params, small()).value_p;
    EXPECT_EQ(scaled_value, std::pow(std::abs(c), params.p) * base) << "c = " << c;
  }
}

TEST(Seminorm, ClippingAndTruncationContract) {
  const Domain disk = make_disk();
  const ScalarField g = sum(scaled(3.0, coordinate_field(0)), constant_field(-0.5));
  const SobolevParams params{0.5, 2.0};
  const double raw = gagliardo_seminorm_p(g, disk, params, small()).value_p;
  EXPECT_LE(gagliardo_seminorm_p(clip01(g), disk, params, small()).value_p, raw);
  EXPECT_LE(gagliardo_seminorm_p(truncate_clip(g, 1.0), disk, params, small()).value_p, raw);
}

TEST(Seminorm, TriangleInequalityAtNormLevel) {
  const SobolevParams params{0.3, 2.0};
  const ScalarField f = coordinate_field(0);
  const ScalarField g = distance_power_field(0.7);
  for (const Domain& domain : {make_disk(), make_comb(), koch_prefractal(4)}) {
    auto norm = [&](const ScalarField& h) {
      return std::pow(gagliardo_seminorm_p(h, domain, params, small(1 << 16)).value_p, 1.0 / params.p);
    };
    EXPECT_LE(norm(sum(f, g)), (norm(f) + norm(g)) * (1 + 1e-12)) << domain.label();
  }
}

TEST(Seminorm, BiasBoundFromModulus) {
  const SeminormEstimate lip = gagliardo_seminorm_p(coordinate_field(0), make_unit_square(), {0.5, 2}, small(1 << 14));
  EXPECT_GT(lip.bias_bound, 0.0);
  EXPECT_LT(lip.bias_bound, 1e-3);
  const ScalarField opaque("opaque", [](const Point& x, double) { return x.x(); });
  const SeminormEstimate none = gagliardo_seminorm_p(opaque, make_unit_square(), {0.5, 2}, small(1 << 14));
  EXPECT_TRUE(std::isinf(none.bias_bound));
  EXPECT_EQ(none.value_p, lip.value_p);
}

TEST(CutoffBound, VanishesOffTheCutoffSupport) {
  const int n = 8;
  const Lemma1Report r = lemma1_check(distance_ramp_field(0.3, 0.4), make_disk(), {0.5, 2}, n, small());
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.implied_C, 0.0);
}

TEST(CutoffBound, ConstantFieldOnKochHasNoSeminormTerm) {
  const Lemma1Report r = lemma1_check(constant_field(1.0), koch_prefractal(7), {0.3, 1}, 32, small());
  EXPECT_EQ(r.term_semi, 0.0);
  EXPECT_GT(r.term_mass, 0.0);
  EXPECT_TRUE(std::isfinite(r.implied_C));
  EXPECT_DOUBLE_EQ(r.implied_C, r.lhs / r.term_mass);
}

TEST(CutoffBound, ImpliedConstantStableAcrossN) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int n : {8, 16, 32}) {
    const Lemma1Report r = lemma1_check(coordinate_field(0), make_unit_square(), {0.5, 2}, n, small());
    EXPECT_GE(r.lhs, 0.0);
    EXPECT_GE(r.term_mass, 0.0);
    EXPECT_GE(r.term_semi, 0.0);
    lo = std::min(lo, r.implied_C);
    hi = std::max(hi, r.implied_C);
  }
  EXPECT_LT(hi / lo, 3.0);
}

TEST(Hardy, DiskOracle) {
  const HardyQuotient q = hardy_quotient(constant_field(1.0), make_disk(), {0.25, 2.0}, small());
  EXPECT_NEAR(q.value, 8.0 * kPi / 3.0, 0.02 * 8.0 * kPi / 3.0);
  EXPECT_FALSE(q.diverged);
  EXPECT_EQ(q.shells.size(), static_cast<std::size_t>(kHardyShells));
}

TEST(Hardy, DiskDivergesAboveOne) {
  const HardyQuotient q = hardy_quotient(constant_field(1.0), make_disk(), {0.6, 2.0}, small());
  EXPECT_TRUE(q.diverged);
  EXPECT_GT(q.tail_slope, kHardyDivergenceSlope);
}

TEST(Hardy, FieldVanishingNearBoundaryIsPlainIntegral) {
  // f = 1 on {d > 0.5} of the unit disk: integral of d^-sp over the disk of radius 0.5.
  const ScalarField f("core", [](const Point&, double d) { return d > 0.5 ? 1.0 : 0.0; });
  const HardyQuotient q = hardy_quotient(f, make_disk(), {0.25, 2.0}, small());
  // 2 pi * integral_0^0.5 rho (1 - rho)^-0.5 d rho.
  const double exact = 2.0 * kPi * (4.0 / 3.0 - 2.0 * std::sqrt(0.5) + (2.0 / 3.0) * std::pow(0.5, 1.5));
  EXPECT_NEAR(q.value, exact, 0.02 * exact);
  EXPECT_FALSE(q.diverged);
}

TEST(HardyRhs, ConstantVanishes) {
  const IntegralEstimate e =
      hardy_rhs_localized(constant_field(2.0), make_disk(), ScalingFunction::power(0.5), 1.0, 2.0, small());
  EXPECT_EQ(e.value, 0.0);
}

TEST(HardyRhs, DoublingPhiHalvesExactly) {
  const Domain disk = make_disk();
  const ScalarField u = distance_power_field(1.0);
  const IntegralEstimate a = hardy_rhs_localized(u, disk, ScalingFunction::power(0.5), 1.0, 2.0, small());
  const IntegralEstimate b = hardy_rhs_localized(u, disk, ScalingFunction::power(0.5, 2.0), 1.0, 2.0, small());
  EXPECT_EQ(b.value, 0.5 * a.value);
}

TEST(HardyRhs, HalfResolutionAgrees) {
  const Domain disk = make_disk();
  const ScalarField u = distance_power_field(1.0);
  const ScalingFunction phi = ScalingFunction::power(0.5);
  const IntegralEstimate full = hardy_rhs_localized(u, disk, phi, 1.0, 2.0, small(1 << 18, 1));
  const IntegralEstimate half = hardy_rhs_localized(u, disk, phi, 1.0, 2.0, small(1 << 17, 2));
  EXPECT_TRUE(std::isfinite(full.value));
  EXPECT_NEAR(full.value, half.value, 3.0 * std::hypot(full.std_error, half.std_error));
}

TEST(Inradius, DiskAndSquare) {
  EXPECT_NEAR(inradius_estimate(make_disk()), 1.0, 0.01);
  EXPECT_NEAR(inradius_estimate(make_unit_square()), 0.5, 0.01);
}

}  // namespace
}  // namespace fraclab
