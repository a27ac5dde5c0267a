#pragma once

#include "tclab/currents.hpp"
#include "tclab/random.hpp"

#include <vector>

namespace tclab {

/// rho (cos, sin, f) with f = amplitude * direction * cos(mode theta / Q);
/// direction defaults to the first normal axis.
WindingCurve single_mode_curve(int q, int n, int mode, double amplitude, double rho = 1.0, const Vec& direction = Vec());

struct RandomCurveOptions {
  /// Modes are drawn from [1, max_mode_factor * Q] without Q.
  int max_mode_factor = 4;
  int max_modes = 3;
  double lip_lo = 0.005;
  double lip_hi = 0.09;
  /// Modes whose single-mode ratio 2k / (1 + k^2) exceeds this are skipped.
  double ratio_cap = 0.94;
};

/// Random profile supported on a few admissible modes with Gaussian
/// coefficients, rescaled to a Lipschitz constant uniform in [lip_lo, lip_hi].
WindingCurve random_multimode_curve(int q, int n, Rng& rng, const RandomCurveOptions& opt = {},
                                    std::vector<int>* modes = nullptr);

/// Band-limited random link (modes 0..8, coefficients up to 0.3) in a random frame.
WindingCurve random_spherical_link(int q, int n, Rng& rng);

}  // namespace tclab
