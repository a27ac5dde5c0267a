#pragma once

#include "tclab/fourier.hpp"
#include "tclab/geom_core.hpp"
#include "tclab/surface.hpp"

#include <optional>

namespace tclab {

/// Q-fold graph curve theta -> frame * rho (cos theta, sin theta, f(theta)),
/// theta in [0, 2 pi Q). The profile is held both as M uniform samples and
/// as its Fourier series; evaluation uses the series.
class WindingCurve {
 public:
  /// m = 0 picks max(64, 16 * max_active, 2N + 2) nodes.
  static WindingCurve from_fourier(const FourierSeries& f, double rho, int orientation = 1, int m = 0);
  /// Series truncated at N = min(64 Q, (M - 2) / 2); throws TruncationTail when
  /// the discarded energy exceeds 1e-9 of the total and Undersampled when
  /// M < 16 * max_active.
  static WindingCurve from_samples(int q, double rho, const Mat& samples, int orientation = 1);
  /// Flat Q-circle of radius rho in the base plane.
  static WindingCurve circle(int q, int n, double rho);

  int Q() const { return series_.Q(); }
  int n() const { return series_.n(); }
  int dim() const { return series_.n() + 2; }
  double rho() const { return rho_; }
  int orientation() const { return orientation_; }
  int M() const { return static_cast<int>(samples_.cols()); }
  const Mat& samples() const { return samples_; }
  const FourierSeries& series() const { return series_; }
  /// Ambient rotation applied to the base coordinates (empty: identity).
  const Mat& frame() const { return frame_; }
  bool sample_source() const { return sample_source_; }

  WindingCurve with_frame(const Mat& frame) const;
  WindingCurve with_orientation(int orientation) const;
  WindingCurve scaled(double lambda) const;
  /// Plane spanned by the first two frame columns.
  Plane2 base_plane() const;

  Vec point(double theta) const;
  /// Point and theta-derivative (parametrization direction, orientation not applied).
  void eval(double theta, Vec& x, Vec& dx) const;

  /// Max adjacent difference quotient of the stored samples.
  double lipschitz() const;
  int max_active() const { return series_.max_active(); }
  /// Node count for periodic quadrature along the curve.
  int quadrature_nodes() const;

 private:
  WindingCurve(FourierSeries f, Mat samples, double rho, int orientation, bool sample_source);

  FourierSeries series_;
  Mat samples_;
  double rho_;
  int orientation_;
  bool sample_source_;
  Mat frame_;
};

/// Arclength of the closed curve.
double curve_mass(const WindingCurve& z);

/// {vertex + t gamma(theta) : t in [0, R]} over the link gamma; with
/// spherical_link the link is first normalized to the unit sphere about the origin.
struct ConeOverCurve {
  Vec vertex;
  WindingCurve link;
  double outer_radius = 1.0;
  bool spherical_link = false;

  ConeOverCurve(WindingCurve link_curve, double radius = 1.0, bool spherical = false, Vec vertex_point = Vec());

  /// gamma(theta) and gamma'(theta) relative to the vertex.
  void link_eval(double theta, Vec& g, Vec& dg) const;
};

/// R^2 / 2 * integral of |gamma ^ gamma'|.
double cone_mass(const ConeOverCurve& c);

/// Chart (t, theta) -> vertex + t gamma(theta).
ParamSurface cone_surface(const ConeOverCurve& c, int order = 32);

}  // namespace tclab
