#include "tclab/errors.hpp"
#include "tclab/families.hpp"
#include "tclab/monotonicity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tclab;

TEST(Monotonicity, GeometricRadiiAreIncreasing) {
  const std::vector<double> r = geometric_radii(1.0, 0.5, 4);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_DOUBLE_EQ(r[0], 0.125);
  EXPECT_DOUBLE_EQ(r[3], 1.0);
  EXPECT_THROW(geometric_radii(1.0, 1.5, 4), Error);
}

TEST(Monotonicity, FlatConeHasZeroDensityGap) {
  const ParamSurface t = cone_surface(ConeOverCurve(WindingCurve::circle(3, 1, 1.0), 1.0));
  const MassProfile p = mass_profile(t, geometric_radii(1.0, 0.5, 5), 3);
  for (std::size_t k = 0; k < p.size(); ++k) {
    EXPECT_NEAR(p.mass[k], 3 * std::numbers::pi * p.radii[k] * p.radii[k], 1e-12);
    EXPECT_NEAR(p.e[k], 0.0, 1e-12);
  }
  EXPECT_NEAR(deviation_integral(t, 0.1, 0.9), 0.0, 1e-15);
}

TEST(Monotonicity, DeviationIntegralMatchesReference) {
  // High-precision reference value from tests/oracles/freeze_values.py.
  FourierSeries f(1, 1, 3);
  f.set_alpha(3, Vec::Constant(1, 0.05));
  const ParamSurface t = harmonic_extension(f, 1.0);
  EXPECT_NEAR(deviation_integral(t, 0.25, 0.5), 0.000459850757574185, 1e-13);
}

TEST(Monotonicity, DeviationIntegralRejectsVertexBall) {
  const ParamSurface t = cone_surface(ConeOverCurve(WindingCurve::circle(1, 1, 1.0), 1.0));
  try {
    deviation_integral(t, 1e-8, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::VertexTooClose);
  }
}

TEST(Monotonicity, HarmonicProfileSatisfiesAlmostMonotonicity) {
  FourierSeries f(2, 1, 5);
  f.set_alpha(5, Vec::Constant(1, 0.02));
  const ParamSurface t = harmonic_extension(f, 1.0);
  const std::vector<double> radii = geometric_radii(1.0, 0.5, 5);
  std::vector<std::vector<double>> d(5, std::vector<double>(5, 0.0));
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) d[i][j] = deviation_integral(t, radii[i], radii[j]);
  const MassProfile p = mass_profile(t, radii, 2);
  const MonotonicityReport ok = check_almost_monotonicity(p, d, 10.0, 1.0);
  EXPECT_TRUE(ok.pass);
  EXPECT_EQ(ok.pairs, 10);
  const MonotonicityReport tight = check_almost_monotonicity(p, d, ok.c02 * 0.5, 1.0);
  EXPECT_FALSE(tight.pass);
  EXPECT_TRUE(tight.witness.has_value());
  EXPECT_NEAR(fit_decay_exponent(p), 2.0 * (5.0 / 2.0 - 1.0), 0.05);
}

TEST(Monotonicity, RadialProjectionVanishesOnCones) {
  Rng rng(3);
  const ParamSurface t = cone_surface(ConeOverCurve(random_spherical_link(2, 2, rng), 1.0, true));
  EXPECT_LT(radial_projection_mass(t, 0.25, 0.5).value, 1e-12);
}

TEST(Monotonicity, DecayConstantMatchesClosedForm) {
  const DecayConstants d{0.2, 1.0, 0.03, 0.3};
  const std::vector<double> radii = geometric_radii(1.0, std::pow(1e-3, 1.0 / 999), 1000);
  const DecayReport rep = decay_envelope(synthesize_decay_profile(d, 0.02, 1.0, radii), d);
  const double closed = closed_form_decay_constant(d, 1.0);
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.c, closed, 0.01 * closed);
}

TEST(Monotonicity, PurePowerProfileNeedsNoConstant) {
  const DecayConstants d{0.5, 1.0, 0.0, 0.1};
  const std::vector<double> radii = geometric_radii(1.0, 0.5, 8);
  std::vector<double> mass;
  for (double r : radii) mass.push_back(std::numbers::pi * r * r * (1.0 + 0.01 * std::pow(r, d.a() - 2.0)));
  const MassProfile p = MassProfile::from_masses(radii, mass, 1);
  EXPECT_NEAR(fit_decay_exponent(p), d.a() - 2.0, 1e-10);
  EXPECT_LT(decay_envelope(p, d).c, 1e-14);
}

TEST(Monotonicity, InvalidConstantsAreRejected) {
  DecayConstants d;
  d.epsilon12 = 1.2;
  EXPECT_THROW(d.validate(), Error);
  d = DecayConstants{0.9, 0.1, 0.0, 0.5};
  try {
    d.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConstants);
  }
}
