#pragma once

#include "tclab/geom_core.hpp"
#include "tclab/surface.hpp"

namespace tclab {

/// Real Fourier series of a profile on [0, 2 pi Q) at frequencies i/Q:
///   f(theta) = alpha_0 + sum_{i=1..N} alpha_i cos(i theta / Q) + beta_i sin(i theta / Q).
/// alpha and beta are n x (N+1); beta column 0 is identically zero.
class FourierSeries {
 public:
  FourierSeries(int q, int n, int n_max);
  FourierSeries(int q, Mat alpha, Mat beta);

  int Q() const { return q_; }
  int n() const { return static_cast<int>(alpha_.rows()); }
  int N() const { return static_cast<int>(alpha_.cols()) - 1; }

  const Mat& alpha() const { return alpha_; }
  const Mat& beta() const { return beta_; }
  void set_alpha(int i, const Vec& a);
  void set_beta(int i, const Vec& b);

  Vec value(double theta) const;
  Vec derivative(double theta) const;
  /// Value and derivative in one pass.
  void eval(double theta, Vec& f, Vec& df) const;

  /// Largest index whose coefficients exceed rel_tol times the largest
  /// coefficient magnitude; 0 for constant profiles.
  int max_active(double rel_tol = 1e-13) const;

  /// Copy resized to N' (zero-padded or truncated).
  FourierSeries resized(int n_max) const;

  /// Maximum adjacent difference quotient over m uniform nodes.
  double lipschitz(int m) const;

 private:
  int q_;
  Mat alpha_;
  Mat beta_;
};

/// Coefficients from m uniform samples (columns of an n x m matrix) at
/// theta_k = 2 pi Q k / m. Requires m >= 2N + 2. If tail_fraction is given it
/// receives the fraction of L2 energy above index N.
FourierSeries analyze(const Mat& samples, int q, int n_max, double* tail_fraction = nullptr);

/// n x m samples at theta_k = 2 pi Q k / m.
Mat synthesize(const FourierSeries& f, int m);

/// Only index Q retained (frequency 1 in theta).
FourierSeries project_modeQ(const FourierSeries& f);
/// f - P(f).
FourierSeries remainder_modeQ(const FourierSeries& f);

struct SobolevNorms {
  double l2 = 0.0;
  double w12 = 0.0;
};

/// Parseval: |f|_L2^2 = 2 pi Q (|a0|^2 + 1/2 sum |a_i|^2 + |b_i|^2), derivative weights (i/Q)^2.
SobolevNorms sobolev_norm(const FourierSeries& f);

/// Interior extension of the profile of the curve rho (cos, sin, f) over the
/// Q-sheeted disk of radius r_out. Chart over (w, theta) in [0,1] x [0, 2 pi Q]:
///   x = frame * (r cos theta, r sin theta, r_out g),  r = r_out w^Q,
///   g = alpha_0 + sum w^i (alpha_i cos(i theta/Q) + beta_i sin(i theta/Q)).
/// Throws LipschitzTooLarge if the boundary profile has Lip > max_lip.
ParamSurface harmonic_extension(const FourierSeries& f, double r_out, const Mat& frame = Mat(), int orientation = 1,
                                double max_lip = 0.5, int order = 32);

/// Panels per theta-line for a profile with the given active index.
int theta_panels(int q, int max_active);

}  // namespace tclab
