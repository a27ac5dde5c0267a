#include "tclab/monotonicity.hpp"

#include "tclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace tclab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVertexBall = 1e-6;

void check_shell(double s, double r) {
  if (s < kVertexBall) fail(ErrorCode::VertexTooClose, "inner radius " + std::to_string(s) + " is below 1e-6");
  if (!(r > s)) fail(ErrorCode::InvalidArgument, "shell needs s < r");
}

}  // namespace

MassProfile MassProfile::from_masses(std::vector<double> radii, std::vector<double> mass, int q) {
  if (radii.size() != mass.size()) fail(ErrorCode::InvalidArgument, "profile radii and masses differ in length");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
      fail(ErrorCode::InvalidArgument, "profile radii must be positive and increasing");
  }
  MassProfile p;
  p.radii = std::move(radii);
  p.mass = std::move(mass);
  p.Q = q;
  p.e.resize(p.radii.size());
  for (std::size_t i = 0; i < p.radii.size(); ++i) p.e[i] = p.mass[i] / (kPi * p.radii[i] * p.radii[i]) - q;
  return p;
}

std::vector<double> geometric_radii(double r0, double ratio, int count) {
  if (!(r0 > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1)
    fail(ErrorCode::InvalidArgument, "geometric grid needs r0 > 0, 0 < ratio < 1, count >= 1");
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[count - 1 - k] = r0 * std::pow(ratio, k);
  return out;
}

MassProfile mass_profile(const ParamSurface& t, const std::vector<double>& radii, int q) {
  const Rect& d = t.domain();
  double reach = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 64; ++k) {
    const double v = d.v0 + (d.v1 - d.v0) * (k + 0.5) / 64;
    reach = std::min(reach, t.eval(d.u1, v).x.norm());
  }
  std::vector<double> mass(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] > reach * (1.0 + 1e-12))
      fail(ErrorCode::InvalidArgument, "radius " + std::to_string(radii[i]) + " exceeds the support reach " +
                                           std::to_string(reach));
    mass[i] = annulus_mass(t, 0.0, radii[i]);
  }
  return MassProfile::from_masses(radii, std::move(mass), q);
}

MassProfile mass_profile(const ConeOverCurve& c, const std::vector<double>& radii) {
  return mass_profile(cone_surface(c), radii, c.link.Q());
}

Vec normal_part(const Vec& z, const Vec& xu, const Vec& xv) {
  const double nu = xu.norm();
  if (!(nu > 0.0)) return z;
  const Vec e1 = xu / nu;
  Vec w = xv - e1.dot(xv) * e1;
  const double nw = w.norm();
  Vec out = z - e1.dot(z) * e1;
  if (nw > 0.0) {
    const Vec e2 = w / nw;
    out -= e2.dot(out) * e2;
  }
  return out;
}

double deviation_integral(const ParamSurface& t, double s, double r) {
  check_shell(s, r);
  ParamSurface shell = t;
  try {
    shell = restrict_annulus(t, s, r);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyRestriction) return 0.0;
    throw;
  }
  auto density = [](const ChartJet& j) {
    const double z2 = j.x.squaredNorm();
    return normal_part(j.x, j.xu, j.xv).squaredNorm() / (z2 * z2) * area_element(j);
  };
  return integrate_checked(shell, density, 1e-6, 1e-14).value;
}

RadialProjection radial_projection_mass(const ParamSurface& t, double s, double r) {
  check_shell(s, r);
  ParamSurface shell = t;
  try {
    shell = restrict_annulus(t, s, r);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyRestriction) return {};
    throw;
  }
  auto value = [](const ChartJet& j) {
    const double z = j.x.norm();
    return normal_part(j.x, j.xu, j.xv).norm() / (z * z * z) * area_element(j);
  };
  auto first = [](const ChartJet& j) {
    const double z2 = j.x.squaredNorm();
    return normal_part(j.x, j.xu, j.xv).squaredNorm() / (z2 * z2) * area_element(j);
  };
  auto second = [](const ChartJet& j) { return area_element(j) / j.x.squaredNorm(); };
  RadialProjection out;
  // |z^perp| has kinks where the normal part changes sign: refine in theta and
  // accept a looser self-check
  QuadratureSpec fine = shell.quadrature();
  fine.v_panels *= 4;
  out.value = integrate_checked(shell.with_quadrature(fine), value, 1e-4, 1e-14).value;
  out.i1 = std::sqrt(integrate_checked(shell, first, 1e-6, 1e-28).value);
  out.i2 = std::sqrt(integrate_checked(shell, second).value);
  return out;
}

MonotonicityReport check_almost_monotonicity(const MassProfile& p, const std::vector<std::vector<double>>& deviation,
                                             double c02_budget, double alpha0) {
  const std::size_t m = p.size();
  if (deviation.size() != m) fail(ErrorCode::InvalidArgument, "deviation table does not match the radii grid");
  MonotonicityReport rep;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (deviation[i].size() != m) fail(ErrorCode::InvalidArgument, "deviation table does not match the radii grid");
      const double lhs = deviation[i][j];
      const double rhs = p.e[j] - p.e[i] + std::pow(p.radii[j], alpha0);
      ++rep.pairs;
      const double need = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (need > rep.c02) {
        rep.c02 = need;
        rep.witness = std::make_pair(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  rep.pass = rep.c02 <= c02_budget;
  if (rep.pass) rep.witness.reset();
  return rep;
}

void DecayConstants::validate() const {
  if (!(epsilon12 > 0.0 && epsilon12 < 1.0)) fail(ErrorCode::InvalidConstants, "epsilon12 must lie in (0, 1)");
  if (!(alpha0 > 0.0)) fail(ErrorCode::InvalidConstants, "alpha0 must be positive");
  if (!(cbar >= 0.0)) fail(ErrorCode::InvalidConstants, "cbar must be nonnegative");
  if (!(eps > 0.0)) fail(ErrorCode::InvalidConstants, "eps must be positive");
  if (!(2.0 + alpha0 > eps + a()))
    fail(ErrorCode::InvalidConstants, "constants violate 2 + alpha0 > eps + a (a = " + std::to_string(a()) + ")");
}

MassProfile synthesize_decay_profile(const DecayConstants& d, double e0, double r0, const std::vector<double>& radii,
                                     int q) {
  d.validate();
  if (!(r0 > 0.0)) fail(ErrorCode::InvalidArgument, "r0 must be positive");
  const double a = d.a();
  const double f0 = e0 * kPi * r0 * r0;
  std::vector<double> mass(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (r > r0 * (1.0 + 1e-15)) fail(ErrorCode::InvalidArgument, "profile radius exceeds r0");
    const double gap =
        std::pow(r, a) * (std::pow(r0, -a) * f0 + (a * d.cbar / d.eps) * (std::pow(r0, d.eps) - std::pow(r, d.eps)));
    mass[i] = q * kPi * r * r + gap;
  }
  return MassProfile::from_masses(radii, std::move(mass), q);
}

double closed_form_decay_constant(const DecayConstants& d, double r0) {
  d.validate();
  const double b = d.a() - 2.0;
  const double x = b / (b + d.eps);
  return d.a() * d.cbar * std::pow(r0, b) / kPi * std::pow(x, b / d.eps) / (b + d.eps);
}

DecayReport decay_envelope(const MassProfile& p, const DecayConstants& d, double budget) {
  if (!(d.epsilon12 > 0.0 && d.epsilon12 < 1.0)) fail(ErrorCode::InvalidConstants, "epsilon12 must lie in (0, 1)");
  if (!(d.eps > 0.0)) fail(ErrorCode::InvalidConstants, "eps must be positive");
  const double b = d.a() - 2.0;
  DecayReport rep;
  for (std::size_t j = 0; j < p.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double s = p.radii[i];
      const double r = p.radii[j];
      const double need = (p.e[i] - std::pow(s / r, b) * p.e[j]) / std::pow(r, d.eps);
      if (need > rep.c) {
        rep.c = need;
        rep.witness = std::make_pair(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  rep.pass = std::isfinite(rep.c) && rep.c <= budget;
  if (rep.pass) rep.witness.reset();
  return rep;
}

double fit_decay_exponent(const MassProfile& p) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p.e[i] > 0.0)) continue;
    const double x = std::log(p.radii[i]);
    const double y = std::log(p.e[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++count;
  }
  if (count < 2) fail(ErrorCode::InvalidArgument, "exponent fit needs two positive gaps");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace tclab
