#include "tclab/flat_homotopy.hpp"

#include "tclab/errors.hpp"
#include "tclab/monotonicity.hpp"
#include "tclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tclab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wedge_norm(const Vec& a, const Vec& b) {
  const double aa = a.squaredNorm();
  const double bb = b.squaredNorm();
  const double ab = a.dot(b);
  return std::sqrt(std::max(0.0, aa * bb - ab * ab));
}

void require_compatible(const WindingCurve& z0, const WindingCurve& z1) {
  if (z0.Q() != z1.Q()) fail(ErrorCode::InvalidArgument, "homotopy needs curves with the same Q");
  if (z0.dim() != z1.dim()) fail(ErrorCode::InvalidArgument, "homotopy needs curves in the same ambient space");
}

/// Point and parametrization derivative of z at theta, including orientation.
void oriented_eval(const WindingCurve& z, double theta, Vec& x, Vec& dx) {
  z.eval(theta, x, dx);
  if (z.orientation() < 0) dx = -dx;
}

class AffineHomotopyChart final : public Chart {
 public:
  AffineHomotopyChart(WindingCurve z0, WindingCurve z1, double phase)
      : z0_(std::move(z0)), z1_(std::move(z1)), phase_(phase) {}
  int dim() const override { return z0_.dim(); }

  ChartJet eval(double t, double theta) const override {
    std::vector<ChartJet> out;
    eval_line(theta, {t}, out);
    return out[0];
  }

  void eval_line(double theta, const std::vector<double>& ts, std::vector<ChartJet>& out) const override {
    Vec a, da, b, db;
    z0_.eval(theta, a, da);
    z1_.eval(theta + phase_, b, db);
    out.resize(ts.size());
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const double t = ts[j];
      out[j] = ChartJet{(1.0 - t) * a + t * b, b - a, (1.0 - t) * da + t * db};
    }
  }

 private:
  WindingCurve z0_;
  WindingCurve z1_;
  double phase_;
};

struct SweepMasses {
  double area = 0.0;
  double cone = 0.0;
  bool degenerate = false;
};

/// Area of the affine sweep and, optionally, the 3-volume of the cone over it.
SweepMasses sweep_masses(const WindingCurve& z0, const WindingCurve& z1, double phase, bool with_cone) {
  const GaussRule& rule = gauss_legendre(24);
  const double period = kTwoPi * z0.Q();
  auto line = [&](double theta, bool cone) {
    Vec a, da, b, db;
    z0.eval(theta, a, da);
    z1.eval(theta + phase, b, db);
    const Vec xt = b - a;
    double total = 0.0;
    for (int k = 0; k < 24; ++k) {
      const double t = 0.5 * (1.0 + rule.nodes[k]);
      const Vec xth = (1.0 - t) * da + t * db;
      double dens = wedge_norm(xt, xth);
      if (cone) dens *= normal_part((1.0 - t) * a + t * b, xt, xth).norm() / 3.0;
      total += 0.5 * rule.weights[k] * dens;
    }
    return total;
  };
  SweepMasses out;
  out.area = integrate_periodic_adaptive([&](double th) { return line(th, false); }, period);
  if (with_cone) out.cone = integrate_periodic_adaptive([&](double th) { return line(th, true); }, period);
  // degeneracy census on a fixed grid
  constexpr int kTheta = 512;
  constexpr int kT = 8;
  std::vector<double> dens;
  double scale = 0.0;
  for (int i = 0; i < kTheta; ++i) {
    Vec a, da, b, db;
    const double theta = period * (i + 0.5) / kTheta;
    z0.eval(theta, a, da);
    z1.eval(theta + phase, b, db);
    for (int k = 0; k < kT; ++k) {
      const double t = (k + 0.5) / kT;
      const Vec xth = (1.0 - t) * da + t * db;
      dens.push_back(wedge_norm(b - a, xth));
      scale = std::max(scale, (b - a).norm() * xth.norm());
      scale = std::max(scale, z0.rho() * std::max(da.norm(), db.norm()));
    }
  }
  const auto small = std::count_if(dens.begin(), dens.end(), [&](double d) { return d <= 1e-13 * scale; });
  out.degenerate = small > static_cast<long>(dens.size() / 100);
  return out;
}

}  // namespace

double integrate_periodic_adaptive(const std::function<double(double)>& f, double period, double rel_tol,
                                   double abs_tol) {
  constexpr int kOrder = 8;
  const GaussRule& rule = gauss_legendre(kOrder);
  auto composite = [&](int panels) {
    const double h = period / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * h;
      double panel = 0.0;
      for (int k = 0; k < kOrder; ++k) panel += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
      total += 0.5 * h * panel;
    }
    return total;
  };
  int panels = 32;
  double prev = composite(panels);
  while (panels < (1 << 17)) {
    panels *= 2;
    const double next = composite(panels);
    if (!std::isfinite(next)) fail(ErrorCode::NonFinite, "non-finite integrand");
    if (std::abs(next - prev) <= rel_tol * std::abs(next) + abs_tol) return next;
    prev = next;
  }
  fail(ErrorCode::QuadratureNotConverged, "periodic integral did not settle under panel doubling");
}

double phase_alignment(const WindingCurve& z0, const WindingCurve& z1) {
  require_compatible(z0, z1);
  const double period = kTwoPi * z0.Q();
  const int nodes = std::max(256, 8 * std::max({z0.Q(), z0.max_active(), z1.max_active()}));
  std::vector<Vec> a(nodes);
  for (int k = 0; k < nodes; ++k) a[k] = z0.point(period * k / nodes);
  auto distance = [&](double phi) {
    double total = 0.0;
    for (int k = 0; k < nodes; ++k) total += (a[k] - z1.point(period * k / nodes + phi)).squaredNorm();
    return total;
  };
  const int scan = 16 * std::max({z0.Q(), z0.max_active(), z1.max_active(), 4});
  int best = 0;
  double best_value = distance(0.0);
  for (int j = 1; j < scan; ++j) {
    const double v = distance(period * j / scan);
    if (v < best_value) best_value = v, best = j;
  }
  if (best_value == 0.0) return period * best / scan;
  // golden-section refinement on the bracketing scan cells
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = period * (best - 1) / scan;
  double hi = period * (best + 1) / scan;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = distance(x1);
  double f2 = distance(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-13 * period; ++it) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = distance(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = distance(x2);
    }
  }
  const double phi = 0.5 * (lo + hi);
  return distance(phi) < best_value ? phi : period * best / scan;
}

ParamSurface affine_homotopy_surface(const WindingCurve& z0, const WindingCurve& z1, double phase, int order) {
  require_compatible(z0, z1);
  QuadratureSpec q;
  q.order = order;
  q.v_panels = theta_panels(z0.Q(), std::max(z0.max_active(), z1.max_active()));
  return ParamSurface(std::make_shared<AffineHomotopyChart>(z0, z1, phase), Rect{0.0, 1.0, 0.0, kTwoPi * z0.Q()}, 1,
                      1, q);
}

FlatEstimate affine_homotopy_filling(const WindingCurve& z0, const WindingCurve& z1) {
  require_compatible(z0, z1);
  const double phase = phase_alignment(z0, z1);
  const SweepMasses m = sweep_masses(z0, z1, phase, false);
  FlatEstimate est;
  est.filling = m.area;
  est.bound = m.area;
  est.degenerate = m.degenerate;
  est.contributions = {{"homotopy", m.area}};
  return est;
}

FlatEstimate radial_homotopy_filling(const ParamSurface& t, double s, double r, int t_order) {
  if (!(s > 0.0) || !(r > s)) fail(ErrorCode::InvalidArgument, "radial homotopy needs 0 < s < r");
  const GaussRule& rule = gauss_legendre(t_order);
  double filling = 0.0;
  for (int k = 0; k < t_order; ++k) {
    const double tau = 0.5 * (1.0 + rule.nodes[k]);
    filling += 0.5 * rule.weights[k] * tau * tau * radial_projection_mass(t, s * tau, r * tau).value;
  }
  const double residual = radial_projection_mass(t, s, r).value;
  FlatEstimate est;
  est.filling = filling;
  est.residual = residual;
  est.bound = filling + residual;
  est.contributions = {{"filling", filling}, {"residual", residual}};
  return est;
}

namespace {

Mat plane_frame(const WindingCurve& z, const Plane2& plane) {
  const Mat f = z.frame().size() > 0 ? z.frame() : Mat(Mat::Identity(z.dim(), z.dim()));
  return complete_frame(plane, f.rightCols(z.n()));
}

}  // namespace

FlatEstimate cone_difference_bound(const WindingCurve& z, const Plane2& plane) {
  if (plane.dim() != z.dim()) fail(ErrorCode::InvalidArgument, "plane dimension mismatch");
  const Mat frame = plane_frame(z, plane);
  const double period = kTwoPi * z.Q();
  const int scan = z.quadrature_nodes();
  Vec x, dx;
  for (int k = 0; k < scan; ++k) {
    oriented_eval(z, period * k / scan, x, dx);
    const Vec p = frame.transpose() * x;
    const Vec dp = frame.transpose() * dx;
    if (!(p(0) * dp(1) - p(1) * dp(0) > 0.0))
      fail(ErrorCode::NotGraph, "curve does not wind monotonically around the plane");
  }
  // match the parametrization direction of z, which runs backwards when its
  // orientation is reversed
  Mat circle_frame = frame;
  if (z.orientation() < 0) circle_frame.col(1) = -circle_frame.col(1);
  const WindingCurve circle = WindingCurve::circle(z.Q(), z.n(), z.rho()).with_frame(circle_frame);
  const WindingCurve forward = z.with_orientation(1);
  const SweepMasses m = sweep_masses(circle, forward, phase_alignment(circle, forward), true);
  FlatEstimate est;
  est.filling = m.cone;
  est.residual = m.area;
  est.bound = m.area + m.cone;
  est.degenerate = m.degenerate;
  est.contributions = {{"homotopy", m.area}, {"cone_over_homotopy", m.cone}};
  return est;
}

double cone_difference_lower_bound(const WindingCurve& z, const Plane2& plane) {
  const int dim = z.dim();
  const int nodes = z.quadrature_nodes();
  const double period = kTwoPi * z.Q();
  Mat cone = Mat::Zero(dim, dim);
  Vec x, dx;
  for (int k = 0; k < nodes; ++k) {
    oriented_eval(z, period * k / nodes, x, dx);
    cone += wedge(x, dx);
  }
  cone *= 0.5 * period / nodes;
  const Mat disk = z.Q() * std::numbers::pi * z.rho() * z.rho() * plane.bivector();
  const Mat r = cone - disk;
  double best = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) best = std::max(best, std::abs(r(i, j)));
  return best;
}

RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) fail(ErrorCode::InvalidArgument, "rate fit needs matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    ++count;
  }
  if (count < 2) fail(ErrorCode::InvalidArgument, "rate fit needs two positive samples");
  RateFit fit;
  fit.kappa = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0 && y[i] > 0.0) fit.c = std::max(fit.c, y[i] / std::pow(x[i], fit.kappa));
  return fit;
}

}  // namespace tclab
