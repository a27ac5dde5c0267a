#include "tclab/currents.hpp"

#include "tclab/errors.hpp"

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

}  // namespace

WindingCurve::WindingCurve(FourierSeries f, Mat samples, double rho, int orientation, bool sample_source)
    : series_(std::move(f)),
      samples_(std::move(samples)),
      rho_(rho),
      orientation_(orientation),
      sample_source_(sample_source) {
  if (!(rho_ > 0.0) || !std::isfinite(rho_)) fail(ErrorCode::InvalidArgument, "curve radius must be positive");
  if (orientation_ != 1 && orientation_ != -1) fail(ErrorCode::InvalidArgument, "orientation must be +-1");
  if (!samples_.allFinite()) fail(ErrorCode::NonFinite, "curve samples contain non-finite values");
  const int k = series_.max_active();
  if (M() < 16 * k)
    fail(ErrorCode::Undersampled, std::to_string(M()) + " samples for active index " + std::to_string(k) +
                                      " (need at least " + std::to_string(16 * k) + ")");
}

WindingCurve WindingCurve::from_fourier(const FourierSeries& f, double rho, int orientation, int m) {
  if (m <= 0) m = std::max({64, 16 * f.max_active(), 2 * f.N() + 2});
  return WindingCurve(f, synthesize(f, m), rho, orientation, false);
}

WindingCurve WindingCurve::from_samples(int q, double rho, const Mat& samples, int orientation) {
  const int m = static_cast<int>(samples.cols());
  if (m < 4) fail(ErrorCode::Undersampled, "at least 4 samples are required");
  if (!samples.allFinite()) fail(ErrorCode::NonFinite, "curve samples contain non-finite values");
  const int n_max = std::min(64 * q, (m - 2) / 2);
  double tail = 0.0;
  FourierSeries f = analyze(samples, q, n_max, &tail);
  const double total = samples.squaredNorm() / m;
  if (tail > 1e-9 && tail * total > 1e-24)
    fail(ErrorCode::TruncationTail, "Fourier tail above index " + std::to_string(n_max) + " carries fraction " +
                                        std::to_string(tail) + " of the energy");
  return WindingCurve(f, samples, rho, orientation, true);
}

WindingCurve WindingCurve::circle(int q, int n, double rho) {
  return from_fourier(FourierSeries(q, n, 0), rho);
}

WindingCurve WindingCurve::with_frame(const Mat& frame) const {
  if (frame.size() > 0 && (frame.rows() != dim() || frame.cols() != dim()))
    fail(ErrorCode::InvalidArgument, "frame must be (2+n) x (2+n)");
  WindingCurve out = *this;
  out.frame_ = frame;
  return out;
}

WindingCurve WindingCurve::with_orientation(int orientation) const {
  WindingCurve out = *this;
  if (orientation != 1 && orientation != -1) fail(ErrorCode::InvalidArgument, "orientation must be +-1");
  out.orientation_ = orientation;
  return out;
}

WindingCurve WindingCurve::scaled(double lambda) const {
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidArgument, "scale factor must be positive");
  WindingCurve out = *this;
  out.rho_ *= lambda;
  return out;
}

Plane2 WindingCurve::base_plane() const {
  if (frame_.size() == 0) return Plane2::coordinate(dim());
  return Plane2(frame_.col(0), frame_.col(1));
}

void WindingCurve::eval(double theta, Vec& x, Vec& dx) const {
  Vec f, df;
  series_.eval(theta, f, df);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  x.resize(dim());
  dx.resize(dim());
  x << rho_ * c, rho_ * s, rho_ * f;
  dx << -rho_ * s, rho_ * c, rho_ * df;
  if (frame_.size() > 0) {
    x = frame_ * x;
    dx = frame_ * dx;
  }
}

Vec WindingCurve::point(double theta) const {
  Vec x, dx;
  eval(theta, x, dx);
  return x;
}

double WindingCurve::lipschitz() const {
  const double h = kTwoPi * Q() / M();
  double lip = 0.0;
  for (int k = 0; k < M(); ++k) lip = std::max(lip, (samples_.col((k + 1) % M()) - samples_.col(k)).norm() / h);
  return lip;
}

int WindingCurve::quadrature_nodes() const { return std::max(1024, 64 * std::max(Q(), max_active())); }

double curve_mass(const WindingCurve& z) {
  Vec x, dx;
  const double m = integrate_periodic(
      [&](double theta) {
        z.eval(theta, x, dx);
        return dx.norm();
      },
      kTwoPi * z.Q(), z.quadrature_nodes());
  if (!std::isfinite(m)) fail(ErrorCode::NonFinite, "non-finite curve mass");
  return m;
}

ConeOverCurve::ConeOverCurve(WindingCurve link_curve, double radius, bool spherical, Vec vertex_point)
    : vertex(vertex_point.size() > 0 ? std::move(vertex_point) : Vec::Zero(link_curve.dim())),
      link(std::move(link_curve)),
      outer_radius(radius),
      spherical_link(spherical) {
  if (!(outer_radius > 0.0)) fail(ErrorCode::InvalidArgument, "cone outer radius must be positive");
  if (vertex.size() != link.dim()) fail(ErrorCode::InvalidArgument, "cone vertex dimension mismatch");
}

void ConeOverCurve::link_eval(double theta, Vec& g, Vec& dg) const {
  link.eval(theta, g, dg);
  if (spherical_link) {
    const double r = g.norm();
    if (!(r > 0.0)) fail(ErrorCode::DegenerateCone, "link passes through the origin");
    g /= r;
    dg = (dg - g.dot(dg) * g) / r;
  }
}

double cone_mass(const ConeOverCurve& c) {
  const int nodes = c.link.quadrature_nodes();
  const double h = kTwoPi * c.link.Q() / nodes;
  Vec g, dg;
  double total = 0.0;
  double scale = 0.0;
  std::vector<double> values(nodes);
  for (int k = 0; k < nodes; ++k) {
    c.link_eval(k * h, g, dg);
    if (!(g.norm() > 0.0)) fail(ErrorCode::DegenerateCone, "vertex lies on the link");
    values[k] = wedge_norm(g, dg);
    scale = std::max(scale, values[k]);
    total += values[k];
  }
  if (!std::isfinite(total)) fail(ErrorCode::NonFinite, "non-finite cone integrand");
  int run = 0;
  for (int k = 0; k < nodes + 1; ++k) {
    run = values[k % nodes] <= 1e-12 * scale ? run + 1 : 0;
    if (run >= 2 || scale == 0.0) fail(ErrorCode::DegenerateCone, "gamma ^ gamma' vanishes on an interval");
  }
  return 0.5 * c.outer_radius * c.outer_radius * total * h;
}

namespace {

class ConeChart final : public Chart {
 public:
  explicit ConeChart(ConeOverCurve cone) : cone_(std::move(cone)) {}
  int dim() const override { return cone_.link.dim(); }

  ChartJet eval(double t, double theta) const override {
    std::vector<ChartJet> out;
    eval_line(theta, {t}, out);
    return out[0];
  }

  void eval_line(double theta, const std::vector<double>& ts, std::vector<ChartJet>& out) const override {
    Vec g, dg;
    cone_.link_eval(theta, g, dg);
    out.resize(ts.size());
    for (std::size_t j = 0; j < ts.size(); ++j) out[j] = ChartJet{cone_.vertex + ts[j] * g, g, ts[j] * dg};
  }

 private:
  ConeOverCurve cone_;
};

}  // namespace

ParamSurface cone_surface(const ConeOverCurve& c, int order) {
  QuadratureSpec quad;
  quad.order = order;
  quad.v_panels = theta_panels(c.link.Q(), c.link.max_active());
  return ParamSurface(std::make_shared<ConeChart>(c), Rect{0.0, c.outer_radius, 0.0, kTwoPi * c.link.Q()}, 1,
                      c.link.orientation(), quad);
}

}  // namespace tclab
