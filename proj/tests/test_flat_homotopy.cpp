#include "tclab/errors.hpp"
#include "tclab/families.hpp"
#include "tclab/flat_homotopy.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tclab;

TEST(FlatHomotopy, AdaptiveIntegralHandlesKinks) {
  EXPECT_NEAR(integrate_periodic_adaptive([](double t) { return std::abs(std::sin(t)); }, 2 * std::numbers::pi), 4.0,
              1e-9);
}

TEST(FlatHomotopy, ConcentricCirclesBoundAnnulus) {
  for (int q = 1; q <= 2; ++q) {
    const FlatEstimate e =
        affine_homotopy_filling(WindingCurve::circle(q, 1, 1.0), WindingCurve::circle(q, 1, 1.1));
    EXPECT_NEAR(e.bound, q * std::numbers::pi * 0.21, 1e-10);
  }
}

TEST(FlatHomotopy, IdenticalCurvesNeedNoFilling) {
  const WindingCurve z = single_mode_curve(2, 1, 5, 0.02);
  const FlatEstimate e = affine_homotopy_filling(z, z);
  EXPECT_NEAR(e.bound, 0.0, 1e-14);
  EXPECT_TRUE(e.degenerate);
}

TEST(FlatHomotopy, RateFitRecoversPowerLaw) {
  const std::vector<double> x = {1.0, 0.5, 0.25, 0.125};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.7));
  const RateFit f = fit_rate(x, y);
  EXPECT_NEAR(f.kappa, 1.7, 1e-12);
  EXPECT_NEAR(f.c, 3.0, 1e-12);
}

TEST(FlatHomotopy, RadialFillingVanishesOnCones) {
  Rng rng(12);
  const ParamSurface t = cone_surface(ConeOverCurve(random_spherical_link(1, 2, rng), 1.0, true));
  EXPECT_LT(radial_homotopy_filling(t, 0.25, 0.5).bound, 1e-12);
}

TEST(FlatHomotopy, RadialFillingDecaysLinearlyForMode2) {
  const ParamSurface t = harmonic_extension(single_mode_curve(1, 1, 2, 0.02).series(), 1.0);
  const double b1 = radial_homotopy_filling(t, 0.25, 0.5).bound;
  const double b2 = radial_homotopy_filling(t, 0.125, 0.25).bound;
  EXPECT_NEAR(std::log2(b1 / b2), 1.0, 0.01);
}

TEST(FlatHomotopy, ConeDifferenceBoundDominatesLowerBound) {
  for (int q = 1; q <= 2; ++q) {
    const WindingCurve z = single_mode_curve(q, 2, q, 0.03);
    const double upper = cone_difference_bound(z, z.base_plane()).bound;
    const double lower = cone_difference_lower_bound(z, z.base_plane());
    EXPECT_GT(lower, 0.0);
    EXPECT_GE(upper, lower);
  }
  const WindingCurve c = WindingCurve::circle(2, 1, 1.0);
  EXPECT_NEAR(cone_difference_bound(c, c.base_plane()).bound, 0.0, 1e-14);
}

TEST(FlatHomotopy, RadialFillingRejectsVertexBall) {
  const ParamSurface t = cone_surface(ConeOverCurve(WindingCurve::circle(1, 1, 1.0), 1.0));
  EXPECT_THROW(radial_homotopy_filling(t, 1e-9, 0.5), Error);
}
