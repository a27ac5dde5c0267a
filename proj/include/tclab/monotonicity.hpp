#pragma once

#include "tclab/currents.hpp"
#include "tclab/surface.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace tclab {

/// r -> ||T||(B_r) on an increasing grid, with e(r) = f(r) / (pi r^2) - Q.
struct MassProfile {
  std::vector<double> radii;
  std::vector<double> mass;
  std::vector<double> e;
  int Q = 1;

  static MassProfile from_masses(std::vector<double> radii, std::vector<double> mass, int q);
  std::size_t size() const { return radii.size(); }
};

/// Geometric grid r0, r0 q, r0 q^2, ... (count points), returned increasing.
std::vector<double> geometric_radii(double r0, double ratio, int count);

/// Masses of T restricted to B_r about the origin. Throws InvalidArgument if a
/// radius exceeds the inner radius of the chart boundary image.
MassProfile mass_profile(const ParamSurface& t, const std::vector<double>& radii, int q);
MassProfile mass_profile(const ConeOverCurve& c, const std::vector<double>& radii);

/// Component of z orthogonal to span(xu, xv).
Vec normal_part(const Vec& z, const Vec& xu, const Vec& xv);

/// Integral of |z^perp|^2 / |z|^4 over T restricted to B_r \ B_s.
/// Throws VertexTooClose if s < 1e-6.
double deviation_integral(const ParamSurface& t, double s, double r);

struct RadialProjection {
  double value = 0.0;  ///< integral of |z^perp| / |z|^3
  double i1 = 0.0;     ///< (integral of |z^perp|^2 / |z|^4)^(1/2)
  double i2 = 0.0;     ///< (integral of |z|^-2)^(1/2)
};

/// Area-formula bound for the mass of the radial projection of T restricted to
/// B_r \ B_s, with the Cauchy-Schwarz factors. Throws VertexTooClose if s < 1e-6.
RadialProjection radial_projection_mass(const ParamSurface& t, double s, double r);

struct MonotonicityReport {
  bool pass = true;
  /// Smallest C with D(s, r) <= C (e(r) - e(s) + r^alpha0) over all pairs.
  double c02 = 0.0;
  int pairs = 0;
  std::optional<std::pair<int, int>> witness;
};

/// deviation is indexed [i][j] for radii[i] < radii[j]; entries with i >= j are ignored.
MonotonicityReport check_almost_monotonicity(const MassProfile& p, const std::vector<std::vector<double>>& deviation,
                                             double c02_budget, double alpha0);

struct DecayConstants {
  double epsilon12 = 0.1;
  double alpha0 = 1.0;
  double cbar = 0.0;
  double eps = 0.1;

  double a() const { return 2.0 / (1.0 - epsilon12); }
  /// Throws InvalidConstants unless 0 < epsilon12 < 1, alpha0 > 0, cbar >= 0,
  /// eps > 0 and 2 + alpha0 > eps + a.
  void validate() const;
};

/// Solution of (r^-a f)' = -a cbar r^(eps - 1) through f(r0) = e0 pi r0^2,
/// returned as masses Q pi r^2 + f(r).
MassProfile synthesize_decay_profile(const DecayConstants& d, double e0, double r0, const std::vector<double>& radii,
                                     int q = 1);

/// Least C with e(s) <= (s/r)^(a-2) e(r) + C r^eps over the profile, attained
/// by the synthesized profile in the limit of a fine grid.
double closed_form_decay_constant(const DecayConstants& d, double r0);

struct DecayReport {
  bool pass = true;
  double c = 0.0;
  std::optional<std::pair<int, int>> witness;
};

/// Fits the least C with e(s) <= (s/r)^(a-2) e(r) + C r^eps over all grid
/// pairs; PASS iff C <= budget. Only epsilon12 and eps are used.
DecayReport decay_envelope(const MassProfile& p, const DecayConstants& d, double budget = 100.0);

/// Least-squares slope of log e against log r (entries with e <= 0 skipped).
double fit_decay_exponent(const MassProfile& p);

}  // namespace tclab
