#include "tclab/families.hpp"

#include "tclab/epiperimetric.hpp"
#include "tclab/errors.hpp"

#include <algorithm>

namespace tclab {

namespace {

Vec random_unit(int n, Rng& rng) {
  Vec v(n);
  for (int k = 0; k < n; ++k) v(k) = rng.normal();
  return v / v.norm();
}

}  // namespace

WindingCurve single_mode_curve(int q, int n, int mode, double amplitude, double rho, const Vec& direction) {
  if (mode < 0) fail(ErrorCode::InvalidArgument, "mode index must be nonnegative");
  Vec dir = direction.size() == 0 ? Vec::Unit(n, 0) : direction;
  if (dir.size() != n) fail(ErrorCode::InvalidArgument, "mode direction must have n entries");
  FourierSeries f(q, n, std::max(mode, 1));
  f.set_alpha(mode, amplitude * dir);
  return WindingCurve::from_fourier(f, rho);
}

WindingCurve random_multimode_curve(int q, int n, Rng& rng, const RandomCurveOptions& opt, std::vector<int>* modes) {
  std::vector<int> pool;
  for (int i = 1; i <= opt.max_mode_factor * q; ++i)
    if (i != q && linearized_ratio(i, q) <= opt.ratio_cap) pool.push_back(i);
  if (pool.empty()) fail(ErrorCode::InvalidArgument, "no admissible modes for Q = " + std::to_string(q));
  const int count = rng.uniform_int(1, std::min<int>(opt.max_modes, static_cast<int>(pool.size())));
  std::vector<int> chosen;
  while (static_cast<int>(chosen.size()) < count) {
    const int i = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
    if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) chosen.push_back(i);
  }
  std::sort(chosen.begin(), chosen.end());
  FourierSeries f(q, n, chosen.back());
  for (int i : chosen) {
    Vec a(n), b(n);
    for (int k = 0; k < n; ++k) a(k) = rng.normal(), b(k) = rng.normal();
    f.set_alpha(i, a);
    f.set_beta(i, b);
  }
  const WindingCurve raw = WindingCurve::from_fourier(f, 1.0);
  const double target = rng.uniform(opt.lip_lo, opt.lip_hi);
  const double scale = target / f.lipschitz(raw.M());
  if (modes) *modes = chosen;
  return WindingCurve::from_fourier(FourierSeries(q, scale * f.alpha(), scale * f.beta()), 1.0);
}

WindingCurve random_spherical_link(int q, int n, Rng& rng) {
  constexpr int kModes = 8;
  FourierSeries f(q, n, kModes);
  for (int i = 0; i <= kModes; ++i) {
    f.set_alpha(i, rng.uniform(0.0, 0.3) * random_unit(n, rng));
    if (i > 0) f.set_beta(i, rng.uniform(0.0, 0.3) * random_unit(n, rng));
  }
  return WindingCurve::from_fourier(f, rng.uniform(0.5, 2.0)).with_frame(random_rotation(n + 2, rng.next()));
}

}  // namespace tclab
