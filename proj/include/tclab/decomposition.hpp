#pragma once

#include "tclab/currents.hpp"
#include "tclab/geom_core.hpp"

#include <optional>
#include <vector>

namespace tclab {

struct ClusterOptions {
  double c = 10.0;
  double gamma = 1.0;
  double theta_min = 0.1;
  /// Tubes must be disjoint outside B(core_fraction * r).
  double core_fraction = 0.5;

  double width(double r) const;
};

/// Smallest principal angle between two 2-planes.
double principal_angle(const Plane2& a, const Plane2& b);

/// Radius above which tubes of width C r^(1 + gamma) about two planes at
/// principal angle theta meet outside B(core_fraction * r).
double overlap_radius(double theta, const ClusterOptions& opt);

/// Sample points of the curves with per-curve node ranges.
struct CurveSamples {
  std::vector<Vec> points;
  std::vector<int> curve;
};
CurveSamples sample_curves(const std::vector<WindingCurve>& curves);

struct PlaneCluster {
  std::vector<Plane2> planes;
  /// Winding multiplicity about each plane.
  std::vector<int> multiplicities;
  /// Plane index per curve, -1 if its samples are unassigned or split between tubes.
  std::vector<int> curve_assignment;
  /// Plane index per sample point, -1 if it lies in no tube.
  std::vector<int> point_assignment;
  double tube_width = 0.0;
  int unassigned_points = 0;
  bool pass = true;
};

/// Assigns every sample to the unique tube {y : dist(y, V_i) <= C r^(1+gamma)}
/// containing it (nearest plane, lowest index on ties, inside the core ball).
/// Throws TubesOverlap if two planes are closer than theta_min or their
/// tubes meet outside the core ball at radius r.
PlaneCluster cluster_by_planes(const std::vector<WindingCurve>& curves, const std::vector<Plane2>& planes, double r,
                               const ClusterOptions& opt = {});

/// Base planes of the curves, merging planes closer than theta_min / 2 (first one kept).
std::vector<Plane2> candidate_planes(const std::vector<WindingCurve>& curves, const ClusterOptions& opt = {});

/// Winding number of the projection of z onto the plane about the origin.
int winding_about(const WindingCurve& z, const Plane2& plane);

struct CurveGroup {
  int plane = -1;
  int multiplicity = 0;
  std::vector<int> members;
  /// Length of the curve samples assigned to the plane's tube.
  double mass = 0.0;
  double cone_mass = 0.0;
};

struct SplitResult {
  std::vector<CurveGroup> groups;
  double total_mass = 0.0;
  /// |total - sum of group masses| / total.
  double leak = 0.0;
  int total_q = 0;
  bool pass = true;
};

/// Groups curves by plane. Throws MassLeak if group masses miss the total by
/// more than 1e-9 relative or the cluster left points unassigned.
SplitResult split_current(const std::vector<WindingCurve>& curves, const PlaneCluster& cluster);

struct IrreducibilityVerdict {
  bool irreducible = true;
  int components = 1;
  /// Curve indices of each connected component of the support.
  std::vector<std::vector<int>> partition;
  double spacing = 0.0;
};

/// Connectivity of the cross-section at radius r of the cone over the group,
/// on the sample graph with edge threshold 4 * spacing. A single component is
/// confirmed at half the spacing before IRREDUCIBLE is returned.
IrreducibilityVerdict irreducibility_check(const std::vector<WindingCurve>& group, double r);

}  // namespace tclab
