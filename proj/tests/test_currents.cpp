#include "tclab/currents.hpp"
#include "tclab/errors.hpp"
#include "tclab/families.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tclab;

// High-precision reference values from tests/oracles/freeze_values.py.
constexpr double kCurveLength = 18.955141507439991157;       // Q=2, mode 3, a=0.1, rho=1.5
constexpr double kSphericalConeMass = 6.3026291852065918398;  // same curve, link on the unit sphere

TEST(Currents, CurveMassMatchesReference) {
  const WindingCurve z = single_mode_curve(2, 1, 3, 0.1, 1.5);
  EXPECT_NEAR(curve_mass(z), kCurveLength, 1e-12);
}

TEST(Currents, SphericalConeMassMatchesReference) {
  const WindingCurve z = single_mode_curve(2, 1, 3, 0.1, 1.5);
  EXPECT_NEAR(cone_mass(ConeOverCurve(z, 1.0, true)), kSphericalConeMass, 1e-12);
}

TEST(Currents, FlatCircleConeIsQDisks) {
  for (int q = 1; q <= 3; ++q) {
    const WindingCurve c = WindingCurve::circle(q, 2, 0.7);
    EXPECT_NEAR(curve_mass(c), 2 * std::numbers::pi * q * 0.7, 1e-13 * q * 4.4);
    EXPECT_NEAR(cone_mass(ConeOverCurve(c, 1.0)), std::numbers::pi * q * 0.49, 1e-13);
    EXPECT_NEAR(surface_mass(cone_surface(ConeOverCurve(c, 1.0))), std::numbers::pi * q * 0.49, 1e-12);
  }
}

TEST(Currents, ConeSurfaceMassAgreesWithLineIntegral) {
  Rng rng(5);
  for (int k = 0; k < 4; ++k) {
    const ConeOverCurve c(random_spherical_link(1 + k % 3, 2, rng), 1.0, true);
    EXPECT_NEAR(surface_mass(cone_surface(c)), cone_mass(c), 1e-10 * cone_mass(c));
  }
}

TEST(Currents, ScalingAndFrameActOnPoints) {
  const WindingCurve z = single_mode_curve(1, 2, 3, 0.05);
  const Mat r = random_rotation(4, 3);
  const WindingCurve w = z.scaled(2.0).with_frame(r);
  for (double t : {0.1, 2.5}) EXPECT_LT((w.point(t) - 2.0 * r * z.point(t)).norm(), 1e-14);
  EXPECT_NEAR(curve_mass(w), 2.0 * curve_mass(z), 1e-12);
}

TEST(Currents, FromSamplesDetectsTruncationAndUndersampling) {
  FourierSeries f(1, 1, 20);
  f.set_alpha(20, Vec::Constant(1, 0.01));
  try {
    WindingCurve::from_samples(1, 1.0, synthesize(f, 128));
    FAIL() << "expected Undersampled";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Undersampled);
  }
  const WindingCurve ok = WindingCurve::from_samples(1, 1.0, synthesize(f, 512));
  EXPECT_EQ(ok.max_active(), 20);
}

TEST(Currents, PushforwardByLinearMapScalesMass) {
  const ParamSurface disk = cone_surface(ConeOverCurve(WindingCurve::circle(1, 1, 1.0), 1.0));
  const ParamSurface big = pushforward(disk, linear_map(3.0 * Mat::Identity(3, 3)));
  EXPECT_NEAR(surface_mass(big), 9.0 * std::numbers::pi, 1e-11);
}

TEST(Currents, AnnulusMassOfFlatCone) {
  const ParamSurface t = cone_surface(ConeOverCurve(WindingCurve::circle(2, 1, 1.0), 1.0));
  EXPECT_NEAR(annulus_mass(t, 0.25, 0.5), 2 * std::numbers::pi * (0.25 - 0.0625), 1e-12);
}
