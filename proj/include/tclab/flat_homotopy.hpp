#pragma once

#include "tclab/currents.hpp"
#include "tclab/surface.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace tclab {

/// Upper bound M(filling) + M(residual) for a flat distance.
struct FlatEstimate {
  double filling = 0.0;
  double residual = 0.0;
  double bound = 0.0;
  /// Swept chart has vanishing Jacobian on a set of positive measure.
  bool degenerate = false;
  std::vector<std::pair<std::string, double>> contributions;
};

/// Integral over [0, period) of a function with possible kinks, by composite
/// Gauss-Legendre with panel doubling until successive sums agree to rel_tol.
double integrate_periodic_adaptive(const std::function<double(double)>& f, double period, double rel_tol = 1e-9,
                                   double abs_tol = 1e-15);

/// Shift phi minimizing the L2 distance between z0(theta) and z1(theta + phi).
double phase_alignment(const WindingCurve& z0, const WindingCurve& z1);

/// Chart (t, theta) -> (1 - t) z0(theta) + t z1(theta + phase).
ParamSurface affine_homotopy_surface(const WindingCurve& z0, const WindingCurve& z1, double phase, int order = 32);

/// Mass of the phase-aligned affine homotopy from z0 to z1.
FlatEstimate affine_homotopy_filling(const WindingCurve& z0, const WindingCurve& z1);

/// Filling int_0^1 t^2 M(F#(T restricted to B_rt \ B_st)) dt plus the residual
/// M(F#(T restricted to B_r \ B_s)), F(x) = x / |x|. Throws VertexTooClose if s < 1e-6.
FlatEstimate radial_homotopy_filling(const ParamSurface& t, double s, double r, int t_order = 8);

/// Bound for F(0xxZ - Q [[plane]]) by M(A) + M(0xxA), A the affine homotopy from
/// the Q-circle of radius rho in the plane to Z. Throws NotGraph if Z does not
/// wind monotonically around the plane.
FlatEstimate cone_difference_bound(const WindingCurve& z, const Plane2& plane);

/// max |R(omega)| over coordinate 2-forms of comass 1, R = 0xxZ - Q [[plane disk of radius rho]]:
/// a lower bound for F(R).
double cone_difference_lower_bound(const WindingCurve& z, const Plane2& plane);

/// y ~ C x^kappa by least squares in log-log; c is the least constant with
/// y <= c x^kappa on every sample.
struct RateFit {
  double kappa = 0.0;
  double c = 0.0;
};
RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tclab
