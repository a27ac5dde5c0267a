#include "tclab/epiperimetric.hpp"

#include "tclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tclab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Mat frame_or_identity(const WindingCurve& z) {
  return z.frame().size() > 0 ? z.frame() : Mat(Mat::Identity(z.dim(), z.dim()));
}

}  // namespace

double cylindrical_excess(const WindingCurve& z, const Plane2& tau) {
  const int dim = z.dim();
  if (tau.dim() != dim) fail(ErrorCode::InvalidArgument, "excess: plane dimension mismatch");
  const Mat pi = tau.bivector();
  const Mat proj = tau.projector();
  const int nodes = z.quadrature_nodes();
  const double h = kTwoPi * z.Q() / nodes;
  const double o = z.orientation();
  std::vector<double> weight(nodes);
  std::vector<double> pairing(nodes);
  std::vector<Mat> xis(nodes);
  Vec x, dx;
  double signed_area = 0.0;
  for (int k = 0; k < nodes; ++k) {
    z.eval(k * h, x, dx);
    const double px = (proj * x).norm();
    if (!(px > 0.5 * x.norm()))
      fail(ErrorCode::SupportEscapesCylinder, "cone over the curve leaves B_2 inside the unit cylinder");
    const double xx = x.squaredNorm();
    const double dd = dx.squaredNorm();
    const double xd = x.dot(dx);
    const double area = std::sqrt(std::max(0.0, xx * dd - xd * xd));
    if (!(area > 0.0)) fail(ErrorCode::DegenerateCone, "cone over the curve degenerates");
    Mat xi = (o / area) * wedge(x, dx);
    weight[k] = area / (2.0 * px * px);
    pairing[k] = bivector_inner(xi, pi);
    signed_area += pairing[k] * weight[k];
    xis[k] = std::move(xi);
  }
  const double s = signed_area < 0.0 ? -1.0 : 1.0;
  double total = 0.0;
  for (int k = 0; k < nodes; ++k) {
    // |xi - s tau|^2 = 2 (1 - s p) = 2 |xi - s p tau|^2 / (1 + s p) for unit xi, tau
    const double sp = s * pairing[k];
    double dev;
    if (sp > 0.0) {
      const double off = 0.5 * (xis[k] - pairing[k] * pi).squaredNorm();
      dev = 2.0 * off / (1.0 + sp);
    } else {
      dev = 2.0 * (1.0 - sp);
    }
    total += 0.5 * dev * weight[k];
  }
  return total * h;
}

Plane2 tilted_plane(const WindingCurve& z, const Mat& a) {
  const int n = z.n();
  if (a.rows() != n || a.cols() != 2) fail(ErrorCode::InvalidArgument, "tilt matrix must be n x 2");
  const Mat f = frame_or_identity(z);
  const Mat normals = f.rightCols(n);
  return Plane2(f.col(0) + normals * a.col(0), f.col(1) + normals * a.col(1));
}

ExcessReport optimal_plane(const WindingCurve& z, const OptimalPlaneOptions& opts) {
  const int n = z.n();
  const int p = 2 * n;
  auto energy = [&](const Vec& v) {
    return cylindrical_excess(z, tilted_plane(z, Eigen::Map<const Mat>(v.data(), n, 2)));
  };
  Vec x = Vec::Zero(p);
  const double raw = energy(x);
  if (!(raw < opts.max_raw_excess))
    fail(ErrorCode::ExcessTooLarge, "excess " + std::to_string(raw) + " against the base plane is not below " +
                                        std::to_string(opts.max_raw_excess));
  double e = raw;
  const double h = opts.fd_step;
  Vec g(p);
  Mat hess(p, p);
  for (int iter = 0; iter <= opts.max_iterations; ++iter) {
    std::vector<double> plus(p), minus(p);
    for (int i = 0; i < p; ++i) {
      Vec xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      plus[i] = energy(xp);
      minus[i] = energy(xm);
      g(i) = (plus[i] - minus[i]) / (2.0 * h);
      hess(i, i) = (plus[i] - 2.0 * e + minus[i]) / (h * h);
    }
    if (g.norm() < opts.grad_tol) {
      return ExcessReport{tilted_plane(z, Eigen::Map<const Mat>(x.data(), n, 2)), e, raw, g.norm(), iter};
    }
    if (iter == opts.max_iterations) break;
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) {
        Vec xpp = x, xpm = x, xmp = x, xmm = x;
        xpp(i) += h, xpp(j) += h;
        xpm(i) += h, xpm(j) -= h;
        xmp(i) -= h, xmp(j) += h;
        xmm(i) -= h, xmm(j) -= h;
        hess(i, j) = hess(j, i) = (energy(xpp) - energy(xpm) - energy(xmp) + energy(xmm)) / (4.0 * h * h);
      }
    Eigen::LDLT<Mat> ldlt(hess);
    Vec d = ldlt.solve(-g);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !d.allFinite() || d.dot(g) >= 0.0) d = -g;
    double t = 1.0;
    double next = energy(x + d);
    while (next > e + 1e-4 * t * d.dot(g) && t > 1e-12) {
      t *= 0.5;
      next = energy(x + t * d);
    }
    if (next > e) break;
    x += t * d;
    e = next;
  }
  fail(ErrorCode::NoConvergence, "optimal plane: gradient " + std::to_string(g.norm()) + " after " +
                                     std::to_string(opts.max_iterations) + " iterations");
}

WindingCurve regraph(const WindingCurve& z, const Plane2& tau_in) {
  const Plane2 base = z.base_plane();
  const Plane2 tau = bivector_inner(tau_in.bivector(), base.bivector()) < 0.0 ? tau_in.flipped() : tau_in;
  const Mat f = frame_or_identity(z);
  const Mat frame = complete_frame(tau, f.rightCols(z.n()));
  const int q = z.Q();
  const int n = z.n();

  // projected angle phi(theta) = theta + delta(theta) and the normal/radial ratio
  struct Local {
    double delta;
    double dphi;
    double radius;
    Vec p;
  };
  Vec x, dx;
  auto local = [&](double theta) {
    z.eval(theta, x, dx);
    Vec p = frame.transpose() * x;
    const Vec dp = frame.transpose() * dx;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double r2 = p(0) * p(0) + p(1) * p(1);
    Local out;
    out.delta = std::atan2(-s * p(0) + c * p(1), c * p(0) + s * p(1));
    out.dphi = (p(0) * dp(1) - p(1) * dp(0)) / r2;
    out.radius = std::sqrt(r2);
    out.p = std::move(p);
    return out;
  };
  auto check = [&](const Local& l) {
    if (!(std::abs(l.delta) < 0.5 * std::numbers::pi) || !(l.dphi > 0.0) || !(l.radius > 0.0))
      fail(ErrorCode::NotGraph, "curve is not a graph over the requested plane");
  };
  const int scan = z.quadrature_nodes();
  for (int k = 0; k < scan; ++k) check(local(kTwoPi * q * k / scan));

  const int m = std::max(z.M(), 256 * q);
  Mat samples(n, m);
  for (int k = 0; k < m; ++k) {
    const double target = kTwoPi * q * k / m;
    double theta = target;
    Local l = local(theta);
    theta = target - l.delta;
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      l = local(theta);
      check(l);
      const double res = theta + l.delta - target;
      if (std::abs(res) <= 1e-15 * std::max(1.0, std::abs(target))) {
        converged = true;
        break;
      }
      theta -= res / l.dphi;
    }
    if (!converged) fail(ErrorCode::NotGraph, "angle inversion over the requested plane did not converge");
    samples.col(k) = l.p.tail(n) / l.radius;
  }
  const int n_max = std::min(64 * q, (m - 2) / 2);
  double tail = 0.0;
  const FourierSeries full = analyze(samples, q, n_max, &tail);
  if (tail > 1e-9 && tail * samples.squaredNorm() / m > 1e-24)
    fail(ErrorCode::TruncationTail, "regraphed profile is not resolved by " + std::to_string(m) + " samples");
  int keep = 0;
  for (int i = 1; i <= full.N(); ++i)
    if (std::max(full.alpha().col(i).cwiseAbs().maxCoeff(), full.beta().col(i).cwiseAbs().maxCoeff()) > 1e-14)
      keep = i;
  return WindingCurve::from_fourier(full.resized(keep), z.rho(), z.orientation()).with_frame(frame);
}

Competitor build_competitor(const WindingCurve& z, const Plane2& tau, double delta, int order) {
  const bool same = plane_distance(tau, z.base_plane()) < 1e-15;
  WindingCurve boundary = same ? z.with_frame(frame_or_identity(z)) : regraph(z, tau);
  const double lip = boundary.lipschitz();
  if (lip > delta)
    fail(ErrorCode::LipschitzTooLarge,
         "profile over the plane has Lip " + std::to_string(lip) + " above " + std::to_string(delta));
  const Mat& frame = boundary.frame();
  ParamSurface interior =
      harmonic_extension(boundary.series(), boundary.rho(), frame, boundary.orientation(), std::max(delta, 0.5), order);
  ParamSurface cone = cone_surface(ConeOverCurve(boundary, 1.0), order);
  Plane2 plane(frame.col(0), frame.col(1));
  if (boundary.orientation() < 0) plane = plane.flipped();
  double trace = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double theta = kTwoPi * boundary.Q() * (k + 0.5) / 64;
    trace = std::max(trace, (interior.eval(1.0, theta).x - boundary.point(theta)).norm());
  }
  if (trace > 1e-8 * boundary.rho())
    fail(ErrorCode::NotGraph, "competitor boundary trace misses the curve by " + std::to_string(trace));
  return Competitor{std::move(boundary), std::move(interior), std::move(cone), plane, lip, trace};
}

EpiperimetricVerdict epiperimetric_gap(const WindingCurve& z, const EpiOptions& opts) {
  const ExcessReport rep = optimal_plane(z, opts.plane);
  const Competitor comp = build_competitor(z, rep.plane, opts.delta, opts.order);
  EpiperimetricVerdict v{.plane = comp.plane};
  v.raw_excess = rep.raw_excess;
  v.optimal_excess = rep.excess;
  v.cone_gap = surface_excess_over_plane(comp.cone, comp.plane);
  v.competitor_gap = surface_excess_over_plane(comp.interior, comp.plane);
  const double area = z.Q() * std::numbers::pi * z.rho() * z.rho();
  v.ratio = v.cone_gap <= 1e-13 * area ? 0.0 : v.competitor_gap / v.cone_gap;
  v.epsilon13 = 1.0 - v.ratio;
  v.admissible = rep.excess < opts.eps_bar && comp.lipschitz <= opts.delta;
  v.pass = v.ratio <= 1.0 - opts.eps_target;
  return v;
}

double linearized_ratio(int i, int q) {
  const double k = static_cast<double>(i) / q;
  return 2.0 * k / (1.0 + k * k);
}

}  // namespace tclab
