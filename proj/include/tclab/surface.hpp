#pragma once

#include "tclab/geom_core.hpp"
#include "tclab/quadrature.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace tclab {

/// Chart value and partials at one parameter point.
struct ChartJet {
  Vec x;
  Vec xu;
  Vec xv;
};

/// A map from a parameter rectangle into R^{2+n} with first partials.
class Chart {
 public:
  virtual ~Chart() = default;
  virtual int dim() const = 0;
  virtual ChartJet eval(double u, double v) const = 0;
  /// Evaluates a whole line of constant v. Charts whose setup depends only
  /// on v (restrictions) override this to share work across the line.
  virtual void eval_line(double v, const std::vector<double>& us, std::vector<ChartJet>& out) const;
};

class FunctionChart final : public Chart {
 public:
  using Fn = std::function<ChartJet(double, double)>;
  FunctionChart(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}
  int dim() const override { return dim_; }
  ChartJet eval(double u, double v) const override { return fn_(u, v); }

 private:
  int dim_;
  Fn fn_;
};

struct Rect {
  double u0 = 0.0;
  double u1 = 1.0;
  double v0 = 0.0;
  double v1 = 1.0;
};

/// Tensor Gauss-Legendre rule, composite over equal panels in each direction.
/// Non-empty u_breaks (increasing fractions of the u-range, strictly inside
/// (0, 1)) replace the equal u-panels.
struct QuadratureSpec {
  int order = 32;
  int u_panels = 1;
  int v_panels = 1;
  std::vector<double> u_breaks;
};

/// Panel boundaries of the u-range as fractions in [0, 1].
std::vector<double> u_panel_edges(const QuadratureSpec& q);

/// Chart-parametrized integer-multiplicity 2-current.
class ParamSurface {
 public:
  ParamSurface(std::shared_ptr<const Chart> chart, Rect domain, int multiplicity = 1, int orientation = 1,
               QuadratureSpec quadrature = {});

  static ParamSurface from_function(int dim, FunctionChart::Fn fn, Rect domain, int multiplicity = 1,
                                    int orientation = 1, QuadratureSpec quadrature = {});

  const Chart& chart() const { return *chart_; }
  const std::shared_ptr<const Chart>& chart_ptr() const { return chart_; }
  const Rect& domain() const { return domain_; }
  int multiplicity() const { return multiplicity_; }
  int orientation() const { return orientation_; }
  const QuadratureSpec& quadrature() const { return quadrature_; }
  int dim() const { return chart_->dim(); }

  ChartJet eval(double u, double v) const { return chart_->eval(u, v); }

  ParamSurface with_quadrature(QuadratureSpec q) const;
  ParamSurface with_order(int order) const;
  ParamSurface reversed() const;

 private:
  std::shared_ptr<const Chart> chart_;
  Rect domain_;
  int multiplicity_;
  int orientation_;
  QuadratureSpec quadrature_;
};

/// sum over tensor nodes of weight * density(jet), times multiplicity.
/// Summation runs in fixed index order.
template <class R, class F>
R integrate_surface(const ParamSurface& s, int order, F&& density, R zero) {
  const GaussRule& rule = gauss_legendre(order);
  const Rect& d = s.domain();
  const QuadratureSpec& q = s.quadrature();
  const double hv = (d.v1 - d.v0) / q.v_panels;
  const std::vector<double> edges = u_panel_edges(q);
  std::vector<double> us;
  std::vector<double> wu;
  for (std::size_t pu = 0; pu + 1 < edges.size(); ++pu) {
    const double lo = d.u0 + edges[pu] * (d.u1 - d.u0);
    const double hi = d.u0 + edges[pu + 1] * (d.u1 - d.u0);
    const double mid = 0.5 * (lo + hi);
    const double hu = hi - lo;
    for (int k = 0; k < order; ++k) {
      us.push_back(mid + 0.5 * hu * rule.nodes[k]);
      wu.push_back(0.5 * hu * rule.weights[k]);
    }
  }
  std::vector<ChartJet> jets;
  R total = zero;
  for (int pv = 0; pv < q.v_panels; ++pv) {
    const double mid = d.v0 + (pv + 0.5) * hv;
    for (int k = 0; k < order; ++k) {
      const double v = mid + 0.5 * hv * rule.nodes[k];
      const double wv = 0.5 * hv * rule.weights[k];
      s.chart().eval_line(v, us, jets);
      R line = zero;
      for (std::size_t j = 0; j < us.size(); ++j) line += wu[j] * density(jets[j]);
      total += wv * line;
    }
  }
  return total * static_cast<double>(s.multiplicity());
}

/// Area element sqrt(EG - F^2) of a jet.
double area_element(const ChartJet& jet);

struct CheckedIntegral {
  double value = 0.0;
  double coarse = 0.0;
};

/// Integrates at the surface's order and at twice that order; throws
/// QuadratureNotConverged when they differ by more than rel_tol * |value| + abs_tol.
CheckedIntegral integrate_checked(const ParamSurface& s, const std::function<double(const ChartJet&)>& density,
                                  double rel_tol = 1e-6, double abs_tol = 1e-13);

/// Mass by the area formula; self-checked by order doubling.
double surface_mass(const ParamSurface& s);

/// Mass at the surface's own order, no self-check (inner loops).
double surface_mass_fixed(const ParamSurface& s);

using FormField = std::function<TwoCovector(const Vec&)>;

/// T(omega) = integral of omega_x(x_u, x_v), signed by orientation.
double integrate_form(const ParamSurface& s, const FormField& omega);

/// integral of (|xi| - <xi, plane>) over the chart: mass minus signed
/// projected area, evaluated without cancellation.
double surface_excess_over_plane(const ParamSurface& s, const Plane2& plane);

/// T restricted to the annulus B_r \ B_s about the origin. Requires |x(u, v)|
/// nondecreasing in u (radial charts). Throws EmptyRestriction for a zero current.
ParamSurface restrict_annulus(const ParamSurface& s, double inner, double outer);

/// Mass of restrict_annulus, 0 for an empty restriction.
double annulus_mass(const ParamSurface& s, double inner, double outer);

/// Smooth ambient map with Jacobian. A missing Jacobian is replaced by central
/// differences.
struct AmbientMap {
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> jacobian;
};

AmbientMap linear_map(const Mat& m);
Mat map_jacobian(const AmbientMap& phi, const Vec& x);

ParamSurface pushforward(const ParamSurface& s, const AmbientMap& phi);

}  // namespace tclab
