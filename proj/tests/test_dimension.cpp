#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fraclab/dimension.hpp"
#include "fraclab/fit.hpp"

namespace fraclab {
namespace {

const double kKochDim = std::log(4.0) / std::log(3.0);

TEST(Fit, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const LineFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r2, 1.0, 1e-14);
}

TEST(Fit, QuantileInterpolates) {
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.5), 2.5);
}

TEST(Minkowski, DiskIsOne) {
  const DimensionEstimate e = minkowski_upper(make_disk(), {});
  EXPECT_NEAR(e.value, 1.0, 0.03);
  EXPECT_GE(e.fit_r2, 0.99);
}

TEST(Minkowski, SegmentIsOne) {
  const Domain segment = make_polygon({Point(0, 0), Point(1, 0)}, "segment");
  EXPECT_NEAR(minkowski_upper(segment, {}).value, 1.0, 0.03);
}

TEST(Minkowski, KochLevelSix) {
  EXPECT_NEAR(minkowski_upper(koch_prefractal(6), {}).value, kKochDim, 0.05);
}

TEST(Minkowski, NeedsFiveScales) {
  MinkowskiOptions opts;
  opts.scales = 4;
  EXPECT_THROW(minkowski_upper(make_disk(), {}, opts), EstimatorError);
}

class CodimFixture : public ::testing::Test {
 protected:
  static SampleConfig cfg() {
    SampleConfig c;
    c.samples = 1 << 18;
    return c;
  }
};

TEST_F(CodimFixture, DiskCodimsAreOneAndAgreeWithMinkowski) {
  const Domain disk = make_disk();
  const CodimEstimates c = assouad_codims(disk, cfg());
  EXPECT_NEAR(c.lower.value, 1.0, 0.05);
  EXPECT_NEAR(c.upper.value, 1.0, 0.05);
  EXPECT_LE(c.lower.value, c.upper.value + 0.02);
  EXPECT_NEAR(minkowski_upper(disk, cfg()).value, 0.5 * (c.lower.value + c.upper.value), 0.08);
}

TEST_F(CodimFixture, SquareCodimsAreOne) {
  const CodimEstimates c = assouad_codims(make_unit_square(), cfg());
  EXPECT_NEAR(c.lower.value, 1.0, 0.05);
  EXPECT_NEAR(c.upper.value, 1.0, 0.05);
}

TEST_F(CodimFixture, DualityIsBitExact) {
  const CodimEstimates c = assouad_codims(make_comb(), cfg());
  const AssouadDimensions d = assouad_dimensions(c);
  EXPECT_EQ(d.upper.value, kAmbientDim - c.lower.value);
  EXPECT_EQ(d.lower.value, kAmbientDim - c.upper.value);
  EXPECT_EQ(d.upper.quantity, DimensionQuantity::assouad_dim_upper);
  EXPECT_GE(d.upper.value, kAmbientDim - 1 - 0.05);
}

TEST_F(CodimFixture, ExponentSpreadBracketsEstimates) {
  const CodimEstimates c = assouad_codims(make_disk(), cfg());
  EXPECT_LE(c.lower.spread_min, c.lower.value);
  EXPECT_GE(c.upper.spread_max, c.upper.value);
  EXPECT_EQ(c.lower.n_centers, default_center_count(cfg()));
  EXPECT_EQ(static_cast<std::size_t>(c.lower.n_scalepairs), c.exponents.size());
}

TEST_F(CodimFixture, DoublingSamplesIsStable) {
  SampleConfig twice = cfg();
  twice.samples *= 2;
  const CodimEstimates a = assouad_codims(make_comb(), cfg());
  const CodimEstimates b = assouad_codims(make_comb(), twice);
  EXPECT_NEAR(a.lower.value, b.lower.value, 2.0 * std::hypot(a.lower.std_error, b.lower.std_error) + 1e-9);
  EXPECT_NEAR(a.upper.value, b.upper.value, 2.0 * std::hypot(a.upper.std_error, b.upper.std_error) + 1e-9);
}

TEST(Homogeneity, LambdaOneRowBoundedByFourPi) {
  const HomogeneityReport h = homogeneity_check(koch_prefractal(5), 1.0, {});
  for (const HomogeneitySample& s : h.samples)
    if (s.lambda == 1.0) {
      EXPECT_LE(s.volume / (s.r * s.r), 4.0 * std::numbers::pi);
    }
}

TEST(Homogeneity, EstimateIsMaxOfRecordedRatios) {
  const HomogeneityReport h = homogeneity_check(make_disk(), 1.0, {});
  double max_ratio = 0.0;
  for (const HomogeneitySample& s : h.samples)
    max_ratio = std::max(max_ratio, s.volume / (s.r * s.r * std::pow(s.lambda, h.sigma)));
  EXPECT_DOUBLE_EQ(h.L_estimate, max_ratio);
  EXPECT_TRUE(h.stable);
}

TEST(Homogeneity, KochStableOnlyAtItsDimension) {
  const Domain koch = koch_prefractal(7);
  EXPECT_TRUE(homogeneity_check(koch, kKochDim, {}).stable);
  EXPECT_FALSE(homogeneity_check(koch, kKochDim - 0.15, {}).stable);
}

}  // namespace
}  // namespace fraclab
