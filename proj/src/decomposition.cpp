#include "tclab/decomposition.hpp"

#include "tclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace tclab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double distance_to_plane(const Vec& y, const Plane2& p) {
  const Vec par = y.dot(p.e1()) * p.e1() + y.dot(p.e2()) * p.e2();
  return (y - par).norm();
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

double ClusterOptions::width(double r) const { return c * std::pow(r, 1.0 + gamma); }

double principal_angle(const Plane2& a, const Plane2& b) {
  Eigen::Matrix2d m;
  m << a.e1().dot(b.e1()), a.e1().dot(b.e2()), a.e2().dot(b.e1()), a.e2().dot(b.e2());
  const double top = Eigen::JacobiSVD<Eigen::Matrix2d>(m).singularValues()(0);
  return std::acos(std::clamp(top, -1.0, 1.0));
}

double overlap_radius(double theta, const ClusterOptions& opt) {
  return std::pow(opt.core_fraction * std::sin(0.5 * theta) / opt.c, 1.0 / opt.gamma);
}

CurveSamples sample_curves(const std::vector<WindingCurve>& curves) {
  CurveSamples s;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const WindingCurve& z = curves[c];
    const int nodes = z.quadrature_nodes();
    const double h = kTwoPi * z.Q() / nodes;
    for (int k = 0; k < nodes; ++k) {
      s.points.push_back(z.point(k * h));
      s.curve.push_back(static_cast<int>(c));
    }
  }
  return s;
}

int winding_about(const WindingCurve& z, const Plane2& plane) {
  const int nodes = z.quadrature_nodes();
  const double h = kTwoPi * z.Q() / nodes;
  double total = 0.0;
  double prev = 0.0;
  for (int k = 0; k <= nodes; ++k) {
    const Vec x = z.point(k * h);
    const double a = x.dot(plane.e1());
    const double b = x.dot(plane.e2());
    if (!(std::hypot(a, b) > 1e-12 * z.rho())) fail(ErrorCode::NotGraph, "curve meets the normal space of the plane");
    const double ang = std::atan2(b, a);
    if (k > 0) {
      double d = ang - prev;
      d -= kTwoPi * std::round(d / kTwoPi);
      total += d;
    }
    prev = ang;
  }
  return z.orientation() * static_cast<int>(std::lround(total / kTwoPi));
}

PlaneCluster cluster_by_planes(const std::vector<WindingCurve>& curves, const std::vector<Plane2>& planes, double r,
                               const ClusterOptions& opt) {
  if (planes.empty()) fail(ErrorCode::InvalidArgument, "clustering needs at least one plane");
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "cluster radius must be positive");
  const double w = opt.width(r);
  for (std::size_t i = 0; i < planes.size(); ++i)
    for (std::size_t j = i + 1; j < planes.size(); ++j) {
      const double theta = principal_angle(planes[i], planes[j]);
      if (theta < opt.theta_min)
        fail(ErrorCode::TubesOverlap, "planes " + std::to_string(i) + " and " + std::to_string(j) +
                                          " are closer than theta_min");
      if (w / std::sin(0.5 * theta) > opt.core_fraction * r)
        fail(ErrorCode::TubesOverlap, "tubes about planes " + std::to_string(i) + " and " + std::to_string(j) +
                                          " meet outside the core at r = " + std::to_string(r) +
                                          " (overlap radius " + std::to_string(overlap_radius(theta, opt)) + ")");
    }
  PlaneCluster out;
  out.planes = planes;
  out.tube_width = w;
  const CurveSamples s = sample_curves(curves);
  out.point_assignment.assign(s.points.size(), -1);
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    double best = w;
    for (std::size_t i = 0; i < planes.size(); ++i) {
      const double d = distance_to_plane(s.points[k], planes[i]);
      if (d <= w && (out.point_assignment[k] < 0 || d < best)) {
        best = d;
        out.point_assignment[k] = static_cast<int>(i);
      }
    }
    if (out.point_assignment[k] < 0) ++out.unassigned_points;
  }
  out.curve_assignment.assign(curves.size(), -2);
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    int& a = out.curve_assignment[s.curve[k]];
    const int p = out.point_assignment[k];
    if (a == -2) a = p;
    else if (a != p) a = -1;
  }
  out.multiplicities.assign(planes.size(), 0);
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const int a = out.curve_assignment[c];
    if (a < 0) {
      out.curve_assignment[c] = -1;
      continue;
    }
    out.multiplicities[a] += std::abs(winding_about(curves[c], planes[a]));
  }
  out.pass = out.unassigned_points == 0 &&
             std::none_of(out.curve_assignment.begin(), out.curve_assignment.end(), [](int a) { return a < 0; });
  return out;
}

std::vector<Plane2> candidate_planes(const std::vector<WindingCurve>& curves, const ClusterOptions& opt) {
  std::vector<Plane2> out;
  for (const WindingCurve& z : curves) {
    const Plane2 p = z.base_plane();
    const bool known =
        std::any_of(out.begin(), out.end(), [&](const Plane2& q) { return principal_angle(p, q) < 0.5 * opt.theta_min; });
    if (!known) out.push_back(p);
  }
  return out;
}

SplitResult split_current(const std::vector<WindingCurve>& curves, const PlaneCluster& cluster) {
  const CurveSamples s = sample_curves(curves);
  if (s.points.size() != cluster.point_assignment.size())
    fail(ErrorCode::InvalidArgument, "cluster does not belong to these curves");
  SplitResult out;
  std::vector<double> by_plane(cluster.planes.size(), 0.0);
  std::size_t k = 0;
  for (const WindingCurve& z : curves) {
    const int nodes = z.quadrature_nodes();
    const double h = kTwoPi * z.Q() / nodes;
    Vec x, dx;
    for (int j = 0; j < nodes; ++j, ++k) {
      z.eval(j * h, x, dx);
      const double m = h * dx.norm();
      out.total_mass += m;
      if (cluster.point_assignment[k] >= 0) by_plane[cluster.point_assignment[k]] += m;
    }
  }
  int q_total = 0;
  for (const WindingCurve& z : curves) q_total += z.Q();
  double assigned = 0.0;
  for (std::size_t p = 0; p < cluster.planes.size(); ++p) {
    CurveGroup g;
    g.plane = static_cast<int>(p);
    g.multiplicity = cluster.multiplicities[p];
    for (std::size_t c = 0; c < curves.size(); ++c) {
      if (cluster.curve_assignment[c] != static_cast<int>(p)) continue;
      g.members.push_back(static_cast<int>(c));
      g.cone_mass += cone_mass(ConeOverCurve(curves[c]));
    }
    g.mass = by_plane[p];
    assigned += g.mass;
    out.total_q += g.multiplicity;
    if (!g.members.empty()) out.groups.push_back(std::move(g));
  }
  out.leak = out.total_mass > 0.0 ? std::abs(out.total_mass - assigned) / out.total_mass : 0.0;
  if (out.leak > 1e-9)
    fail(ErrorCode::MassLeak, "group masses miss the total by " + std::to_string(out.leak) + " relative");
  out.pass = cluster.pass && out.total_q == q_total;
  return out;
}

IrreducibilityVerdict irreducibility_check(const std::vector<WindingCurve>& group, double r) {
  if (group.empty()) fail(ErrorCode::InvalidArgument, "irreducibility needs a nonempty group");
  if (!(r > 1e-6)) fail(ErrorCode::VertexTooClose, "cross-section radius must exceed the vertex ball 1e-6");
  auto components_at = [&](int refine, double& spacing) {
    std::vector<std::vector<Vec>> pts(group.size());
    spacing = 0.0;
    for (std::size_t c = 0; c < group.size(); ++c) {
      const WindingCurve& z = group[c];
      const int nodes = z.quadrature_nodes() * refine;
      const double h = kTwoPi * z.Q() / nodes;
      for (int k = 0; k < nodes; ++k) {
        const Vec x = z.point(k * h);
        const double nx = x.norm();
        if (!(nx > 0.0)) fail(ErrorCode::DegenerateCone, "curve passes through the vertex");
        pts[c].push_back(r * x / nx);
      }
      for (int k = 0; k < nodes; ++k) spacing = std::max(spacing, (pts[c][(k + 1) % nodes] - pts[c][k]).norm());
    }
    const double threshold = 4.0 * spacing;
    std::vector<int> parent(group.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t a = 0; a < group.size(); ++a)
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        if (find_root(parent, static_cast<int>(a)) == find_root(parent, static_cast<int>(b))) continue;
        bool linked = false;
        for (const Vec& p : pts[a]) {
          for (const Vec& q : pts[b])
            if ((p - q).norm() <= threshold) {
              linked = true;
              break;
            }
          if (linked) break;
        }
        if (linked) parent[find_root(parent, static_cast<int>(b))] = find_root(parent, static_cast<int>(a));
      }
    std::vector<std::vector<int>> parts;
    std::vector<int> slot(group.size(), -1);
    for (std::size_t c = 0; c < group.size(); ++c) {
      const int root = find_root(parent, static_cast<int>(c));
      if (slot[root] < 0) {
        slot[root] = static_cast<int>(parts.size());
        parts.emplace_back();
      }
      parts[slot[root]].push_back(static_cast<int>(c));
    }
    return parts;
  };
  IrreducibilityVerdict v;
  double spacing = 0.0;
  v.partition = components_at(1, spacing);
  if (v.partition.size() == 1) {
    double fine = 0.0;
    auto refined = components_at(2, fine);
    if (refined.size() > 1) {
      v.partition = std::move(refined);
      spacing = fine;
    }
  }
  v.components = static_cast<int>(v.partition.size());
  v.irreducible = v.components == 1;
  v.spacing = spacing;
  return v;
}

}  // namespace tclab
