#pragma once

#include "tclab/geom_core.hpp"
#include "tclab/random.hpp"
#include "tclab/surface.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace tclab {

/// Constant 3-covector stored as a fully antisymmetric dim^3 tensor,
/// c(i, j, k) = phi(d_i, d_j, d_k).
class ThreeCovector {
 public:
  explicit ThreeCovector(int dim);

  int dim() const { return dim_; }
  double get(int i, int j, int k) const { return c_[index(i, j, k)]; }
  /// Sets c(i, j, k) and its antisymmetric images.
  void set(int i, int j, int k, double value);

  double operator()(const Vec& a, const Vec& b, const Vec& c) const;
  /// (phi contracted with chi)(v, w) = phi(chi, v, w).
  TwoCovector contract(const Vec& chi) const;
  /// Euclidean norm over i < j < k; equals the comass when dim <= 4.
  double norm() const;

  ThreeCovector operator*(double s) const;

 private:
  std::size_t index(int i, int j, int k) const { return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k; }
  int dim_;
  std::vector<double> c_;
};

/// Smooth 2-form field with optional analytic exterior derivative.
struct TwoFormField {
  int dim = 3;
  FormField omega;
  std::function<ThreeCovector(const Vec&)> d;

  TwoCovector operator()(const Vec& x) const { return omega(x); }
  /// Analytic d if present, central differences otherwise.
  ThreeCovector exterior_derivative(const Vec& x) const;
  ThreeCovector exterior_derivative_fd(const Vec& x, double step = 1e-5) const;
};

TwoFormField constant_form(const TwoCovector& omega);

/// omega_x(v, w) = det[N(y), E^T v, E^T w] with y = E^T (x - center), E a
/// dim x 3 matrix with orthonormal columns and N a unit field on R^3; d omega
/// is (div N)(y) times the volume form of the range of E.
struct NormalField {
  std::function<Eigen::Vector3d(const Eigen::Vector3d&)> n;
  std::function<double(const Eigen::Vector3d&)> div;
};
TwoFormField normal_field_form(const Mat& frame, const Vec& center, NormalField field);

/// N = y / |y|: calibrates spheres about the center, d omega = 2 / |y|.
NormalField radial_normal();
/// N = (y1, y2, 0) / |(y1, y2)|: calibrates cylinders about the y3 axis.
NormalField cylindrical_normal();
/// N = (0, sin(k y3), cos(k y3)): calibrates the plane y3 = 0, comass of d omega <= k.
NormalField twisted_normal(double k);

struct ComassReport {
  double max_comass = 0.0;
  bool pass = true;
  std::optional<std::size_t> witness;
};

/// Max comass of omega over the sample points; PASS iff <= 1 + 1e-9.
ComassReport comass_field_check(const TwoFormField& omega, const std::vector<Vec>& samples);

/// Largest |d omega - central differences| coefficient over the samples.
double derivative_mismatch(const TwoFormField& omega, const std::vector<Vec>& samples);

/// M(T) - T(omega).
double calibration_defect(const ParamSurface& t, const TwoFormField& omega);

/// Affine 2-plane or round hypersphere with nearest-point projection.
class Submanifold {
 public:
  static Submanifold plane(const Plane2& plane, const Vec& offset);
  static Submanifold sphere(const Vec& center, double radius);

  int dim() const { return static_cast<int>(center_.size()); }
  Vec project(const Vec& x) const;
  double distance(const Vec& x) const;
  /// Orthogonal projector onto the tangent space at a point y of the submanifold.
  Mat tangent_projector(const Vec& y) const;
  /// Differential of the nearest-point projection at x.
  Mat projection_jacobian(const Vec& x) const;

 private:
  bool is_sphere_ = false;
  Vec center_;
  Mat projector_;
  double radius_ = 0.0;
};

/// C-infinity cutoff equal to 1 on [0, 1/2] and 0 on [1, infinity).
double smooth_cutoff(double s);

/// x -> cutoff(dist / tube) omega_{p(x)}(P v, P w), P the tangent projector at
/// p(x). The comass never exceeds that of omega on the submanifold.
TwoFormField extend_form(const Submanifold& sigma, const FormField& omega, double tube_radius);

/// The pullback x -> cutoff(dist / tube) omega_{p(x)}(Dp v, Dp w) with the same cutoff.
TwoFormField pullback_form(const Submanifold& sigma, const FormField& omega, double tube_radius);

/// Compactly supported smooth vector field with Jacobian.
struct TestVectorField {
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> jacobian;
  Vec center;
  double support_radius = 0.0;
};

/// chi(x) = bump(|x - c| / radius) (a + B (x - c)), bump(s) = exp(1 - 1 / (1 - s^2)).
TestVectorField bump_field(const Vec& center, double radius, const Vec& a, const Mat& b = Mat());

/// x -> x + t chi(x).
AmbientMap flow_map(const TestVectorField& chi, double t);

struct FirstVariation {
  double lhs = 0.0;
  double rhs = 0.0;
  /// max over steps of |D(h) - rhs| / h^2.
  double error_constant = 0.0;
  std::vector<double> steps;
  std::vector<double> differences;
};

/// Central differences D(h) of t -> M(T + t chi) for each step, Richardson
/// extrapolated over the last two, against T(d omega contracted with chi).
/// Throws NotSemicalibrated if M(T) - T(omega) >= 1e-8. chi must vanish near
/// the boundary of T.
FirstVariation first_variation_pair(const ParamSurface& t, const TwoFormField& omega, const TestVectorField& chi,
                                    const std::vector<double>& steps = {1e-3, 1e-4});

/// Mass of the straight-line homotopy (s, x) -> x + s chi(x), s in [0, eps].
double homotopy_volume(const ParamSurface& t, const TestVectorField& chi, double eps, int s_order = 8);

struct Probe {
  TestVectorField chi;
  double eps = 0.0;
};

struct ProbeResult {
  int id = 0;
  double mass_t = 0.0;
  double mass_perturbed = 0.0;
  double mass_s = 0.0;
  double omega = 0.0;
  double slack = 0.0;
  bool pass = true;
};

struct ProbeReport {
  std::vector<ProbeResult> rows;
  double min_slack = 0.0;
  bool pass = true;
  std::optional<int> witness;
};

/// slack = Omega M(S) - (M(T) - M(T + dS)) for S the homotopy sweep of each
/// probe; PASS iff every slack >= -1e-8.
ProbeReport almost_minimality_probe(const ParamSurface& t, double omega, const std::vector<Probe>& probes);

/// Bumps centered at T(u, v) for (u, v) uniform in `centers`, random unit
/// directions, radii uniform in [r_lo, r_hi], cycling through eps_values.
std::vector<Probe> random_probes(const ParamSurface& t, const Rect& centers, double r_lo, double r_hi,
                                 const std::vector<double>& eps_values, int count, Rng& rng);

/// Disk of the given radius in a plane, polar chart (r, theta).
ParamSurface flat_disk(const Plane2& plane, double radius, QuadratureSpec q = {32, 4, 8, {}});
/// Round 2-sphere in the range of frame (dim x 3), chart (polar angle, azimuth),
/// oriented by the outward normal.
ParamSurface round_sphere(const Mat& frame, const Vec& center, double radius, QuadratureSpec q = {32, 4, 8, {}});
/// Cylinder of the given radius about the third frame axis, heights in [-h, h],
/// chart (angle, height), oriented by the outward normal.
ParamSurface cylinder_patch(const Mat& frame, const Vec& center, double radius, double h,
                            QuadratureSpec q = {32, 4, 8, {}});

}  // namespace tclab
