#include "tclab/errors.hpp"
#include "tclab/semicalibration.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tclab;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Vec> box_samples(int dim, int count, double half, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> out;
  for (int k = 0; k < count; ++k) {
    Vec x(dim);
    for (int j = 0; j < dim; ++j) x(j) = rng.uniform(-half, half);
    out.push_back(x);
  }
  return out;
}

}  // namespace

TEST(Semicalibration, ThreeCovectorIsAntisymmetric) {
  ThreeCovector c(4);
  c.set(0, 1, 3, 2.0);
  EXPECT_DOUBLE_EQ(c.get(1, 0, 3), -2.0);
  EXPECT_DOUBLE_EQ(c.get(3, 1, 0), -2.0);
  EXPECT_DOUBLE_EQ(c.get(0, 0, 3), 0.0);
  EXPECT_DOUBLE_EQ(c(Vec::Unit(4, 0), Vec::Unit(4, 1), Vec::Unit(4, 3)), 2.0);
  const TwoCovector k = c.contract(Vec::Unit(4, 1));
  EXPECT_DOUBLE_EQ(k(Vec::Unit(4, 3), Vec::Unit(4, 0)), 2.0);
  EXPECT_DOUBLE_EQ(c.norm(), 2.0);
}

TEST(Semicalibration, KaehlerFormHasComassOne) {
  const TwoFormField w = constant_form(TwoCovector::basis(4, 0, 1) + TwoCovector::basis(4, 2, 3));
  EXPECT_TRUE(comass_field_check(w, box_samples(4, 10, 1.0, 1)).pass);
  const ComassReport bad = comass_field_check(constant_form(TwoCovector::basis(3, 0, 1, 1.5)), box_samples(3, 10, 1.0, 1));
  EXPECT_FALSE(bad.pass);
  EXPECT_NEAR(bad.max_comass, 1.5, 1e-14);
  ASSERT_TRUE(bad.witness.has_value());
}

TEST(Semicalibration, AnalyticDerivativesMatchDifferences) {
  const Mat e = random_rotation(4, 5).leftCols(3);
  const Vec c = Vec::Constant(4, 0.1);
  for (const NormalField& n : {radial_normal(), cylindrical_normal(), twisted_normal(1.7)}) {
    const TwoFormField w = normal_field_form(e, c, n);
    EXPECT_LT(derivative_mismatch(w, box_samples(4, 20, 1.0, 2)), 1e-7);
    EXPECT_TRUE(comass_field_check(w, box_samples(4, 50, 1.0, 3)).pass);
  }
}

TEST(Semicalibration, CalibratedSurfacesHaveNoDefect) {
  const Mat e = Mat::Identity(3, 3);
  const Vec o = Vec::Zero(3);
  EXPECT_NEAR(calibration_defect(round_sphere(e, o, 0.8), normal_field_form(e, o, radial_normal())), 0.0, 1e-12);
  EXPECT_NEAR(calibration_defect(cylinder_patch(e, o, 0.6, 1.0), normal_field_form(e, o, cylindrical_normal())), 0.0,
              1e-12);
  EXPECT_NEAR(calibration_defect(flat_disk(Plane2::coordinate(3), 1.0), normal_field_form(e, o, twisted_normal(2.0))),
              0.0, 1e-12);
}

TEST(Semicalibration, TiltedDiskDefect) {
  for (double phi : {0.2, 0.6}) {
    Vec a = Vec::Unit(3, 0);
    Vec b = std::cos(phi) * Vec::Unit(3, 1) + std::sin(phi) * Vec::Unit(3, 2);
    const ParamSurface disk = flat_disk(Plane2(a, b), 1.0);
    EXPECT_NEAR(calibration_defect(disk, constant_form(TwoCovector::basis(3, 0, 1))), kPi * (1 - std::cos(phi)),
                1e-12);
  }
}

TEST(Semicalibration, SmoothCutoffValues) {
  EXPECT_DOUBLE_EQ(smooth_cutoff(0.0), 1.0);
  EXPECT_DOUBLE_EQ(smooth_cutoff(0.5), 1.0);
  EXPECT_DOUBLE_EQ(smooth_cutoff(1.0), 0.0);
  EXPECT_DOUBLE_EQ(smooth_cutoff(3.0), 0.0);
  EXPECT_GT(smooth_cutoff(0.75), 0.0);
  EXPECT_LT(smooth_cutoff(0.75), 1.0);
  EXPECT_GT(smooth_cutoff(0.6), smooth_cutoff(0.9));
}

TEST(Semicalibration, ExtensionKeepsComassWherePullbackGrows) {
  const Submanifold s = Submanifold::sphere(Vec::Zero(3), 1.0);
  const TwoFormField base = normal_field_form(Mat::Identity(3, 3), Vec::Zero(3), radial_normal());
  const TwoFormField ext = extend_form(s, base.omega, 0.3);
  Rng rng(4);
  std::vector<Vec> pts;
  for (int k = 0; k < 500; ++k) {
    Vec x(3);
    for (int j = 0; j < 3; ++j) x(j) = rng.normal();
    pts.push_back(x / x.norm() * rng.uniform(0.75, 1.25));
  }
  EXPECT_LE(comass_field_check(ext, pts).max_comass, 1.0 + 1e-12);
  Vec x = Vec::Unit(3, 2) * 1.1;
  const TwoFormField pull = pullback_form(s, base.omega, 0.3);
  EXPECT_NEAR(comass2(ext(x)), 1.0, 1e-12);
  EXPECT_NEAR(comass2(pull(x)), 1.0 / (1.1 * 1.1), 1e-12);
}

TEST(Semicalibration, BumpFieldJacobianMatchesDifferences) {
  Vec c(3), a(3);
  c << 0.1, -0.2, 0.3;
  a << 1.0, 0.5, -0.7;
  const Mat b = random_rotation(3, 8);
  const TestVectorField chi = bump_field(c, 0.4, a, b);
  Vec x(3);
  x << 0.2, -0.1, 0.25;
  Mat fd(3, 3);
  for (int j = 0; j < 3; ++j) {
    const Vec h = Vec::Unit(3, j) * 1e-6;
    fd.col(j) = (chi.value(x + h) - chi.value(x - h)) / 2e-6;
  }
  EXPECT_LT((chi.jacobian(x) - fd).norm(), 1e-8);
  EXPECT_EQ(chi.value(c + Vec::Unit(3, 0) * 0.41).norm(), 0.0);
}

TEST(Semicalibration, FirstVariationOnSpherePatch) {
  const Mat e = Mat::Identity(3, 3);
  const ParamSurface full = round_sphere(e, Vec::Zero(3), 1.0);
  const ParamSurface patch(full.chart_ptr(), Rect{1.0, 2.2, 0.4, 1.6}, 1, 1, QuadratureSpec{32, 8, 8, {}});
  const Vec center = full.eval(1.6, 1.0).x;
  const TestVectorField chi = bump_field(center, 0.4, Vec::Constant(3, 0.7), Mat::Identity(3, 3) * 0.3);
  const FirstVariation fv = first_variation_pair(patch, normal_field_form(e, Vec::Zero(3), radial_normal()), chi);
  EXPECT_NEAR(fv.lhs, fv.rhs, 1e-8 * std::max(1.0, std::abs(fv.rhs)));
  EXPECT_GT(std::abs(fv.rhs), 1e-3);
}

TEST(Semicalibration, FirstVariationNeedsSemicalibratedSurface) {
  const ParamSurface disk = flat_disk(Plane2::coordinate(3, 0, 2), 1.0);
  const TestVectorField chi = bump_field(Vec::Zero(3), 0.3, Vec::Unit(3, 1));
  try {
    first_variation_pair(disk, constant_form(TwoCovector::basis(3, 0, 1)), chi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSemicalibrated);
  }
}

TEST(Semicalibration, HomotopyVolumeOfNormalTranslation) {
  const ParamSurface disk = flat_disk(Plane2::coordinate(3), 1.0);
  TestVectorField shift;
  shift.value = [](const Vec&) { return Vec::Unit(3, 2); };
  shift.jacobian = [](const Vec&) { return Mat::Zero(3, 3); };
  shift.center = Vec::Zero(3);
  shift.support_radius = 10.0;
  EXPECT_NEAR(homotopy_volume(disk, shift, 0.1), 0.1 * kPi, 1e-12);
}

TEST(Semicalibration, ProbesOnCalibratedDisk) {
  Rng rng(6);
  const ParamSurface disk = flat_disk(Plane2::coordinate(3), 1.0, {32, 8, 16, {}});
  const ProbeReport r = almost_minimality_probe(
      disk, 0.0, random_probes(disk, Rect{0.0, 0.5, 0.0, 2 * kPi}, 0.2, 0.4, {1e-1, 1e-2}, 10, rng));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.rows.size(), 10u);
  for (const ProbeResult& p : r.rows) EXPECT_GE(p.mass_perturbed, p.mass_t - 1e-8);
}
