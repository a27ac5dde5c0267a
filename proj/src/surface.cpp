#include "tclab/surface.hpp"

#include "tclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tclab {

std::vector<double> u_panel_edges(const QuadratureSpec& q) {
  std::vector<double> edges{0.0};
  if (q.u_breaks.empty()) {
    for (int p = 1; p < q.u_panels; ++p) edges.push_back(static_cast<double>(p) / q.u_panels);
  } else {
    for (double b : q.u_breaks) edges.push_back(b);
  }
  edges.push_back(1.0);
  return edges;
}

void Chart::eval_line(double v, const std::vector<double>& us, std::vector<ChartJet>& out) const {
  out.resize(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) out[i] = eval(us[i], v);
}

ParamSurface::ParamSurface(std::shared_ptr<const Chart> chart, Rect domain, int multiplicity, int orientation,
                           QuadratureSpec quadrature)
    : chart_(std::move(chart)),
      domain_(domain),
      multiplicity_(multiplicity),
      orientation_(orientation),
      quadrature_(quadrature) {
  if (!chart_) fail(ErrorCode::InvalidArgument, "surface without chart");
  if (multiplicity_ < 1) fail(ErrorCode::InvalidArgument, "multiplicity must be positive");
  if (orientation_ != 1 && orientation_ != -1) fail(ErrorCode::InvalidArgument, "orientation must be +-1");
  if (!(domain_.u1 >= domain_.u0) || !(domain_.v1 >= domain_.v0))
    fail(ErrorCode::InvalidArgument, "chart domain must be a rectangle");
  if (quadrature_.order < 1 || quadrature_.u_panels < 1 || quadrature_.v_panels < 1)
    fail(ErrorCode::InvalidArgument, "invalid quadrature spec");
  double prev = 0.0;
  for (double b : quadrature_.u_breaks) {
    if (!(b > prev && b < 1.0)) fail(ErrorCode::InvalidArgument, "u_breaks must increase strictly inside (0, 1)");
    prev = b;
  }
}

ParamSurface ParamSurface::from_function(int dim, FunctionChart::Fn fn, Rect domain, int multiplicity,
                                         int orientation, QuadratureSpec quadrature) {
  return ParamSurface(std::make_shared<FunctionChart>(dim, std::move(fn)), domain, multiplicity, orientation,
                      quadrature);
}

ParamSurface ParamSurface::with_quadrature(QuadratureSpec q) const {
  return ParamSurface(chart_, domain_, multiplicity_, orientation_, q);
}

ParamSurface ParamSurface::with_order(int order) const {
  QuadratureSpec q = quadrature_;
  q.order = order;
  return with_quadrature(q);
}

ParamSurface ParamSurface::reversed() const {
  return ParamSurface(chart_, domain_, multiplicity_, -orientation_, quadrature_);
}

double area_element(const ChartJet& jet) {
  const double e = jet.xu.squaredNorm();
  const double g = jet.xv.squaredNorm();
  const double f = jet.xu.dot(jet.xv);
  return std::sqrt(std::max(0.0, e * g - f * f));
}

CheckedIntegral integrate_checked(const ParamSurface& s, const std::function<double(const ChartJet&)>& density,
                                  double rel_tol, double abs_tol) {
  const int order = s.quadrature().order;
  const double coarse = integrate_surface(s, order, density, 0.0);
  const double fine = integrate_surface(s, 2 * order, density, 0.0);
  if (!std::isfinite(coarse) || !std::isfinite(fine)) fail(ErrorCode::NonFinite, "non-finite surface integrand");
  if (std::abs(fine - coarse) > rel_tol * std::abs(fine) + abs_tol)
    fail(ErrorCode::QuadratureNotConverged, "order " + std::to_string(order) + " gives " + std::to_string(coarse) +
                                                ", order " + std::to_string(2 * order) + " gives " +
                                                std::to_string(fine));
  return {fine, coarse};
}

double surface_mass(const ParamSurface& s) { return integrate_checked(s, area_element).value; }

double surface_mass_fixed(const ParamSurface& s) {
  const double m = integrate_surface(s, s.quadrature().order, area_element, 0.0);
  if (!std::isfinite(m)) fail(ErrorCode::NonFinite, "non-finite surface integrand");
  return m;
}

double integrate_form(const ParamSurface& s, const FormField& omega) {
  const int dim = s.dim();
  auto density = [&](const ChartJet& jet) {
    TwoCovector w(dim);
    try {
      w = omega(jet.x);
    } catch (const std::exception& e) {
      fail(ErrorCode::FormUndefined, std::string("form evaluation failed: ") + e.what());
    }
    if (w.dim() != dim || !w.matrix().allFinite()) fail(ErrorCode::FormUndefined, "form undefined on the image");
    return w(jet.xu, jet.xv);
  };
  return s.orientation() * integrate_checked(s, density).value;
}

double surface_excess_over_plane(const ParamSurface& s, const Plane2& plane) {
  const int dim = s.dim();
  if (plane.dim() != dim) fail(ErrorCode::InvalidArgument, "excess: plane dimension mismatch");
  const Mat pi = plane.bivector();
  const double sign = s.orientation();
  auto density = [&](const ChartJet& jet) {
    double norm2 = 0.0;
    double proj = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        const double xi = sign * (jet.xu(i) * jet.xv(j) - jet.xu(j) * jet.xv(i));
        norm2 += xi * xi;
        proj += xi * pi(i, j);
      }
    const double norm = std::sqrt(norm2);
    if (proj <= 0.0) return norm - proj;
    double off = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        const double d = sign * (jet.xu(i) * jet.xv(j) - jet.xu(j) * jet.xv(i)) - proj * pi(i, j);
        off += d * d;
      }
    return off / (norm + proj);
  };
  return integrate_checked(s, density).value;
}

namespace {

/// Restriction of a radial chart to a ball annulus, reparametrized over
/// [0, 1] x [v0, v1] by u = a(v) + w (b(v) - a(v)).
class AnnulusChart final : public Chart {
 public:
  AnnulusChart(std::shared_ptr<const Chart> base, Rect domain, double inner, double outer)
      : base_(std::move(base)), domain_(domain), inner_(inner), outer_(outer) {}

  int dim() const override { return base_->dim(); }

  ChartJet eval(double w, double v) const override {
    std::vector<ChartJet> out;
    eval_line(v, {w}, out);
    return out[0];
  }

  void eval_line(double v, const std::vector<double>& ws, std::vector<ChartJet>& out) const override {
    const Bound lo = solve(inner_, v);
    const Bound hi = solve(outer_, v);
    const double span = hi.u - lo.u;
    std::vector<double> us(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) us[i] = lo.u + ws[i] * span;
    base_->eval_line(v, us, out);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      ChartJet& jet = out[i];
      const double du_dv = lo.du_dv + ws[i] * (hi.du_dv - lo.du_dv);
      jet.xv = jet.xv + du_dv * jet.xu;
      jet.xu = span * jet.xu;
    }
  }

  /// Parameter u with |x(u, v)| = radius, clipped to the chart domain.
  struct Bound {
    double u;
    double du_dv;
  };

  Bound solve(double radius, double v) const {
    const double a = domain_.u0;
    const double b = domain_.u1;
    const ChartJet ja = base_->eval(a, v);
    const double ra = ja.x.norm();
    if (radius <= ra) return {a, 0.0};
    const ChartJet jb = base_->eval(b, v);
    const double rb = jb.x.norm();
    if (radius >= rb) return {b, 0.0};
    double lo = a;
    double hi = b;
    double u = a + (b - a) * (radius - ra) / (rb - ra);
    ChartJet j = base_->eval(u, v);
    for (int it = 0; it < 200; ++it) {
      const double g = j.x.squaredNorm() - radius * radius;
      if (g > 0) hi = u; else lo = u;
      const double dg = 2.0 * j.x.dot(j.xu);
      double next = (dg > 0) ? u - g / dg : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const bool done = std::abs(next - u) <= 1e-15 * std::max(1.0, std::abs(u)) || hi - lo <= 1e-15 * (b - a);
      u = next;
      j = base_->eval(u, v);
      if (done) break;
    }
    const double xu = j.x.dot(j.xu);
    const double xv = j.x.dot(j.xv);
    return {u, xu > 0 ? -xv / xu : 0.0};
  }

 private:
  std::shared_ptr<const Chart> base_;
  Rect domain_;
  double inner_;
  double outer_;
};

class MappedChart final : public Chart {
 public:
  MappedChart(std::shared_ptr<const Chart> base, AmbientMap phi, int dim)
      : base_(std::move(base)), phi_(std::move(phi)), dim_(dim) {}

  int dim() const override { return dim_; }

  ChartJet eval(double u, double v) const override { return map(base_->eval(u, v)); }

  void eval_line(double v, const std::vector<double>& us, std::vector<ChartJet>& out) const override {
    base_->eval_line(v, us, out);
    for (auto& jet : out) jet = map(jet);
  }

 private:
  ChartJet map(const ChartJet& jet) const {
    const Mat d = map_jacobian(phi_, jet.x);
    return {phi_.value(jet.x), d * jet.xu, d * jet.xv};
  }

  std::shared_ptr<const Chart> base_;
  AmbientMap phi_;
  int dim_;
};

}  // namespace

ParamSurface restrict_annulus(const ParamSurface& s, double inner, double outer) {
  if (!(inner >= 0.0) || !(outer >= inner)) fail(ErrorCode::InvalidArgument, "restrict_annulus requires 0 <= s <= r");
  if (outer == inner) fail(ErrorCode::EmptyRestriction, "annulus of zero width");
  const Rect& d = s.domain();
  // |x| must be nondecreasing along every u-line
  constexpr int kV = 9;
  constexpr int kU = 17;
  bool any_nonempty = false;
  for (int iv = 0; iv < kV; ++iv) {
    const double v = d.v0 + (d.v1 - d.v0) * (iv + 0.5) / kV;
    double prev = -1.0;
    for (int iu = 0; iu < kU; ++iu) {
      const double u = d.u0 + (d.u1 - d.u0) * iu / (kU - 1);
      const double r = s.eval(u, v).x.norm();
      if (r < prev - 1e-12 * std::max(1.0, prev))
        fail(ErrorCode::NotRadialChart, "|x| decreases along a u-line of the chart");
      prev = r;
    }
    const double r0 = s.eval(d.u0, v).x.norm();
    if (prev > inner && r0 < outer) any_nonempty = true;
  }
  if (!any_nonempty) fail(ErrorCode::EmptyRestriction, "annulus misses the support");
  auto chart = std::make_shared<AnnulusChart>(s.chart_ptr(), d, inner, outer);
  QuadratureSpec q = s.quadrature();
  q.u_panels = 1;
  q.u_breaks.clear();
  return ParamSurface(chart, Rect{0.0, 1.0, d.v0, d.v1}, s.multiplicity(), s.orientation(), q);
}

double annulus_mass(const ParamSurface& s, double inner, double outer) {
  try {
    return surface_mass(restrict_annulus(s, inner, outer));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyRestriction) return 0.0;
    throw;
  }
}

AmbientMap linear_map(const Mat& m) {
  return {[m](const Vec& x) -> Vec { return m * x; }, [m](const Vec&) -> Mat { return m; }};
}

Mat map_jacobian(const AmbientMap& phi, const Vec& x) {
  if (phi.jacobian) return phi.jacobian(x);
  const Vec y = phi.value(x);
  Mat d(y.size(), x.size());
  const double h = 1e-6 * std::max(1.0, x.norm());
  for (int k = 0; k < x.size(); ++k) {
    Vec xp = x;
    Vec xm = x;
    xp(k) += h;
    xm(k) -= h;
    d.col(k) = (phi.value(xp) - phi.value(xm)) / (2.0 * h);
  }
  return d;
}

ParamSurface pushforward(const ParamSurface& s, const AmbientMap& phi) {
  const Vec probe = s.eval(0.5 * (s.domain().u0 + s.domain().u1), 0.5 * (s.domain().v0 + s.domain().v1)).x;
  const int dim = static_cast<int>(phi.value(probe).size());
  auto chart = std::make_shared<MappedChart>(s.chart_ptr(), phi, dim);
  return ParamSurface(chart, s.domain(), s.multiplicity(), s.orientation(), s.quadrature());
}

}  // namespace tclab
