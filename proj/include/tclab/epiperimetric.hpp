#pragma once

#include "tclab/currents.hpp"
#include "tclab/geom_core.hpp"
#include "tclab/surface.hpp"

#include <string>

namespace tclab {

/// 1/2 of the integral of |xi - tau|^2 over the infinite cone on Z inside the
/// unit cylinder over tau. xi is the unit tangent 2-vector and tau is oriented
/// to agree with the current; |.| is the Euclidean norm on 2-vectors.
/// Throws SupportEscapesCylinder if the cone leaves B_2 before leaving C_1(tau).
double cylindrical_excess(const WindingCurve& z, const Plane2& tau);

/// Plane near the base plane of z: span(e1 + N a1, e2 + N a2) with N the normal
/// frame columns and a1, a2 the columns of the n x 2 matrix a.
Plane2 tilted_plane(const WindingCurve& z, const Mat& a);

struct OptimalPlaneOptions {
  int max_iterations = 50;
  double grad_tol = 1e-8;
  double fd_step = 1e-5;
  double max_raw_excess = 0.1;
};

struct ExcessReport {
  Plane2 plane;
  double excess = 0.0;
  double raw_excess = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
};

/// Newton iteration with difference derivatives over the 2n tilt parameters.
/// Throws ExcessTooLarge if the excess against the base plane is >= max_raw_excess
/// and NoConvergence if stationarity is not reached.
ExcessReport optimal_plane(const WindingCurve& z, const OptimalPlaneOptions& opts = {});

/// The same cone written as a winding graph over tau: each point is slid along
/// its ray onto the cylinder of radius rho over tau. The result carries a frame
/// whose first two columns span tau. Throws NotGraph if the projected angle
/// does not advance monotonically.
WindingCurve regraph(const WindingCurve& z, const Plane2& tau);

struct Competitor {
  WindingCurve boundary;
  /// Harmonic extension of the boundary profile over the disk in tau.
  ParamSurface interior;
  /// Cone over the boundary inside the cylinder, the reference for the gaps.
  ParamSurface cone;
  /// Oriented plane the gaps are measured against.
  Plane2 plane;
  double lipschitz = 0.0;
  double boundary_trace_error = 0.0;
};

/// Throws LipschitzTooLarge if the profile over tau has Lip > delta.
Competitor build_competitor(const WindingCurve& z, const Plane2& tau, double delta = 0.1, int order = 32);

struct EpiOptions {
  double eps_target = 0.05;
  double delta = 0.1;
  double eps_bar = 1e-2;
  int order = 32;
  OptimalPlaneOptions plane;
};

struct EpiperimetricVerdict {
  double raw_excess = 0.0;
  double optimal_excess = 0.0;
  double cone_gap = 0.0;
  double competitor_gap = 0.0;
  double ratio = 0.0;
  double epsilon13 = 1.0;
  bool admissible = false;
  bool pass = false;
  Plane2 plane;
};

EpiperimetricVerdict epiperimetric_gap(const WindingCurve& z, const EpiOptions& opts = {});

/// 2k / (1 + k^2) with k = i / Q: extension over cone energy of a single mode.
double linearized_ratio(int i, int q);

}  // namespace tclab
