#include "tclab/semicalibration.hpp"

#include "tclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tclab {

namespace {

using Vec3 = Eigen::Vector3d;

constexpr double kPi = std::numbers::pi;

Eigen::Matrix3d cross_matrix(const Vec3& n) {
  Eigen::Matrix3d m;
  m << 0.0, n(2), -n(1), -n(2), 0.0, n(0), n(1), -n(0), 0.0;
  return m;
}

double bump(double s) { return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0; }

double bump_derivative(double s) {
  if (s >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return bump(s) * (-2.0 * s / (q * q));
}

}  // namespace

ThreeCovector::ThreeCovector(int dim) : dim_(dim), c_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {
  if (dim < 3) fail(ErrorCode::InvalidArgument, "3-covectors need dimension >= 3");
}

void ThreeCovector::set(int i, int j, int k, double value) {
  c_[index(i, j, k)] = value;
  c_[index(j, k, i)] = value;
  c_[index(k, i, j)] = value;
  c_[index(j, i, k)] = -value;
  c_[index(i, k, j)] = -value;
  c_[index(k, j, i)] = -value;
}

double ThreeCovector::operator()(const Vec& a, const Vec& b, const Vec& c) const {
  double total = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k) {
        const double coef = get(i, j, k);
        if (coef == 0.0) continue;
        Eigen::Matrix3d m;
        m << a(i), b(i), c(i), a(j), b(j), c(j), a(k), b(k), c(k);
        total += coef * m.determinant();
      }
  return total;
}

TwoCovector ThreeCovector::contract(const Vec& chi) const {
  Mat m = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) m(j, k) += chi(i) * get(i, j, k);
  return TwoCovector::from_upper(m);
}

double ThreeCovector::norm() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k) s += get(i, j, k) * get(i, j, k);
  return std::sqrt(s);
}

ThreeCovector ThreeCovector::operator*(double s) const {
  ThreeCovector out = *this;
  for (double& v : out.c_) v *= s;
  return out;
}

ThreeCovector TwoFormField::exterior_derivative(const Vec& x) const {
  return d ? d(x) : exterior_derivative_fd(x);
}

ThreeCovector TwoFormField::exterior_derivative_fd(const Vec& x, double step) const {
  // grad[i] = d/dx^i of the coefficient matrix
  std::vector<Mat> grad(dim);
  for (int i = 0; i < dim; ++i) {
    Vec xp = x;
    Vec xm = x;
    xp(i) += step;
    xm(i) -= step;
    grad[i] = (omega(xp).matrix() - omega(xm).matrix()) / (2.0 * step);
  }
  ThreeCovector out(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = j + 1; k < dim; ++k) out.set(i, j, k, grad[i](j, k) - grad[j](i, k) + grad[k](i, j));
  return out;
}

TwoFormField constant_form(const TwoCovector& omega) {
  TwoFormField f;
  f.dim = omega.dim();
  f.omega = [omega](const Vec&) { return omega; };
  f.d = [dim = omega.dim()](const Vec&) { return ThreeCovector(dim); };
  return f;
}

TwoFormField normal_field_form(const Mat& frame, const Vec& center, NormalField field) {
  if (frame.cols() != 3 || frame.rows() < 3 || center.size() != frame.rows())
    fail(ErrorCode::InvalidArgument, "normal-field forms need a dim x 3 frame and a matching center");
  if (!(frame.transpose() * frame).isApprox(Eigen::Matrix3d::Identity(), 1e-12))
    fail(ErrorCode::InvalidArgument, "frame columns must be orthonormal");
  const int dim = static_cast<int>(frame.rows());
  ThreeCovector vol(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = j + 1; k < dim; ++k) {
        Eigen::Matrix3d m;
        m << frame.row(i), frame.row(j), frame.row(k);
        vol.set(i, j, k, m.determinant());
      }
  TwoFormField f;
  f.dim = dim;
  f.omega = [frame, center, n = field.n](const Vec& x) {
    const Vec3 y = frame.transpose() * (x - center);
    return TwoCovector::from_upper(frame * cross_matrix(n(y)) * frame.transpose());
  };
  f.d = [frame, center, vol, div = field.div](const Vec& x) {
    const Vec3 y = frame.transpose() * (x - center);
    return vol * div(y);
  };
  return f;
}

NormalField radial_normal() {
  return {[](const Vec3& y) -> Vec3 { return y / y.norm(); }, [](const Vec3& y) { return 2.0 / y.norm(); }};
}

NormalField cylindrical_normal() {
  return {[](const Vec3& y) -> Vec3 { return Vec3(y(0), y(1), 0.0) / std::hypot(y(0), y(1)); },
          [](const Vec3& y) { return 1.0 / std::hypot(y(0), y(1)); }};
}

NormalField twisted_normal(double k) {
  return {[k](const Vec3& y) -> Vec3 { return Vec3(0.0, std::sin(k * y(2)), std::cos(k * y(2))); },
          [k](const Vec3& y) { return -k * std::sin(k * y(2)); }};
}

ComassReport comass_field_check(const TwoFormField& omega, const std::vector<Vec>& samples) {
  ComassReport rep;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = comass2(omega(samples[i]));
    if (c > rep.max_comass) rep.max_comass = c, arg = i;
  }
  rep.pass = rep.max_comass <= 1.0 + 1e-9;
  if (!rep.pass) rep.witness = arg;
  return rep;
}

double derivative_mismatch(const TwoFormField& omega, const std::vector<Vec>& samples) {
  if (!omega.d) return 0.0;
  double worst = 0.0;
  for (const Vec& x : samples) {
    const ThreeCovector a = omega.d(x);
    const ThreeCovector b = omega.exterior_derivative_fd(x);
    for (int i = 0; i < omega.dim; ++i)
      for (int j = i + 1; j < omega.dim; ++j)
        for (int k = j + 1; k < omega.dim; ++k) worst = std::max(worst, std::abs(a.get(i, j, k) - b.get(i, j, k)));
  }
  return worst;
}

double calibration_defect(const ParamSurface& t, const TwoFormField& omega) {
  return surface_mass(t) - integrate_form(t, omega.omega);
}

Submanifold Submanifold::plane(const Plane2& plane, const Vec& offset) {
  if (offset.size() != plane.dim()) fail(ErrorCode::InvalidArgument, "plane offset dimension mismatch");
  Submanifold s;
  s.center_ = offset;
  s.projector_ = plane.projector();
  return s;
}

Submanifold Submanifold::sphere(const Vec& center, double radius) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "sphere radius must be positive");
  Submanifold s;
  s.is_sphere_ = true;
  s.center_ = center;
  s.radius_ = radius;
  return s;
}

Vec Submanifold::project(const Vec& x) const {
  if (!is_sphere_) return center_ + projector_ * (x - center_);
  const Vec d = x - center_;
  const double r = d.norm();
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "projection onto a sphere is undefined at its center");
  return center_ + radius_ * d / r;
}

double Submanifold::distance(const Vec& x) const {
  if (!is_sphere_) return (x - project(x)).norm();
  return std::abs((x - center_).norm() - radius_);
}

Mat Submanifold::tangent_projector(const Vec& y) const {
  if (!is_sphere_) return projector_;
  const Vec n = (y - center_).normalized();
  return Mat::Identity(dim(), dim()) - n * n.transpose();
}

Mat Submanifold::projection_jacobian(const Vec& x) const {
  if (!is_sphere_) return projector_;
  const Vec d = x - center_;
  const double r = d.norm();
  const Vec n = d / r;
  return (radius_ / r) * (Mat::Identity(dim(), dim()) - n * n.transpose());
}

double smooth_cutoff(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = psi(1.0 - s);
  return a / (a + psi(s - 0.5));
}

TwoFormField extend_form(const Submanifold& sigma, const FormField& omega, double tube_radius) {
  if (!(tube_radius > 0.0)) fail(ErrorCode::InvalidArgument, "tube radius must be positive");
  TwoFormField f;
  f.dim = sigma.dim();
  f.omega = [sigma, omega, tube_radius](const Vec& x) {
    const double c = smooth_cutoff(sigma.distance(x) / tube_radius);
    if (c == 0.0) return TwoCovector(sigma.dim());
    const Vec y = sigma.project(x);
    const Mat p = sigma.tangent_projector(y);
    return TwoCovector::from_upper(c * p * omega(y).matrix() * p);
  };
  return f;
}

TwoFormField pullback_form(const Submanifold& sigma, const FormField& omega, double tube_radius) {
  if (!(tube_radius > 0.0)) fail(ErrorCode::InvalidArgument, "tube radius must be positive");
  TwoFormField f;
  f.dim = sigma.dim();
  f.omega = [sigma, omega, tube_radius](const Vec& x) {
    const double c = smooth_cutoff(sigma.distance(x) / tube_radius);
    if (c == 0.0) return TwoCovector(sigma.dim());
    const Mat j = sigma.projection_jacobian(x);
    return TwoCovector::from_upper(c * j.transpose() * omega(sigma.project(x)).matrix() * j);
  };
  return f;
}

TestVectorField bump_field(const Vec& center, double radius, const Vec& a, const Mat& b) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "bump radius must be positive");
  if (a.size() != center.size()) fail(ErrorCode::InvalidArgument, "bump direction dimension mismatch");
  const int dim = static_cast<int>(center.size());
  const Mat lin = b.size() == 0 ? Mat::Zero(dim, dim) : b;
  TestVectorField chi;
  chi.center = center;
  chi.support_radius = radius;
  chi.value = [center, radius, a, lin](const Vec& x) -> Vec {
    const Vec d = x - center;
    return bump(d.norm() / radius) * (a + lin * d);
  };
  chi.jacobian = [center, radius, a, lin](const Vec& x) -> Mat {
    const Vec d = x - center;
    const double r = d.norm();
    const double s = r / radius;
    Mat j = bump(s) * lin;
    if (r > 0.0 && s < 1.0) j += (a + lin * d) * ((bump_derivative(s) / (radius * r)) * d).transpose();
    return j;
  };
  return chi;
}

AmbientMap flow_map(const TestVectorField& chi, double t) {
  AmbientMap m;
  m.value = [chi, t](const Vec& x) -> Vec { return x + t * chi.value(x); };
  m.jacobian = [chi, t](const Vec& x) -> Mat {
    return Mat::Identity(x.size(), x.size()) + t * chi.jacobian(x);
  };
  return m;
}

FirstVariation first_variation_pair(const ParamSurface& t, const TwoFormField& omega, const TestVectorField& chi,
                                    const std::vector<double>& steps) {
  if (steps.empty()) fail(ErrorCode::InvalidArgument, "first variation needs at least one step");
  const double defect = calibration_defect(t, omega);
  if (!(defect < 1e-8))
    fail(ErrorCode::NotSemicalibrated, "calibration defect " + std::to_string(defect) + " is not below 1e-8");
  FirstVariation out;
  out.steps = steps;
  for (double h : steps) {
    const double up = surface_mass_fixed(pushforward(t, flow_map(chi, h)));
    const double down = surface_mass_fixed(pushforward(t, flow_map(chi, -h)));
    out.differences.push_back((up - down) / (2.0 * h));
  }
  out.rhs = integrate_form(t, [&](const Vec& x) { return omega.exterior_derivative(x).contract(chi.value(x)); });
  if (steps.size() == 1) {
    out.lhs = out.differences[0];
  } else {
    const std::size_t n = steps.size();
    const double ratio = steps[n - 2] / steps[n - 1];
    out.lhs = (ratio * ratio * out.differences[n - 1] - out.differences[n - 2]) / (ratio * ratio - 1.0);
  }
  for (std::size_t i = 0; i < steps.size(); ++i)
    out.error_constant = std::max(out.error_constant, std::abs(out.differences[i] - out.rhs) / (steps[i] * steps[i]));
  return out;
}

double homotopy_volume(const ParamSurface& t, const TestVectorField& chi, double eps, int s_order) {
  if (!(eps >= 0.0)) fail(ErrorCode::InvalidArgument, "homotopy length must be nonnegative");
  const GaussRule& rule = gauss_legendre(s_order);
  auto density = [&](const ChartJet& jet) {
    const Vec c = chi.value(jet.x);
    if (c.squaredNorm() == 0.0) return 0.0;
    const Mat j = chi.jacobian(jet.x);
    double total = 0.0;
    for (int k = 0; k < s_order; ++k) {
      const double s = 0.5 * eps * (1.0 + rule.nodes[k]);
      Mat cols(jet.x.size(), 3);
      cols.col(0) = c;
      cols.col(1) = jet.xu + s * (j * jet.xu);
      cols.col(2) = jet.xv + s * (j * jet.xv);
      const double g = (cols.transpose() * cols).determinant();
      total += 0.5 * eps * rule.weights[k] * std::sqrt(std::max(0.0, g));
    }
    return total;
  };
  return integrate_surface(t, t.quadrature().order, density, 0.0);
}

ProbeReport almost_minimality_probe(const ParamSurface& t, double omega, const std::vector<Probe>& probes) {
  if (!(omega >= 0.0)) fail(ErrorCode::InvalidArgument, "Omega must be nonnegative");
  ProbeReport rep;
  const double mass_t = surface_mass_fixed(t);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Probe& p = probes[i];
    ProbeResult row;
    row.id = static_cast<int>(i);
    row.mass_t = mass_t;
    row.mass_perturbed = surface_mass_fixed(pushforward(t, flow_map(p.chi, p.eps)));
    row.mass_s = homotopy_volume(t, p.chi, p.eps);
    row.omega = omega;
    row.slack = omega * row.mass_s - (row.mass_t - row.mass_perturbed);
    row.pass = row.slack >= -1e-8;
    if (i == 0 || row.slack < rep.min_slack) rep.min_slack = row.slack;
    if (!row.pass && !rep.witness) rep.witness = row.id;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<Probe> random_probes(const ParamSurface& t, const Rect& centers, double r_lo, double r_hi,
                                 const std::vector<double>& eps_values, int count, Rng& rng) {
  if (eps_values.empty()) fail(ErrorCode::InvalidArgument, "probe family needs at least one eps");
  std::vector<Probe> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform(centers.u0, centers.u1);
    const double v = rng.uniform(centers.v0, centers.v1);
    const double radius = rng.uniform(r_lo, r_hi);
    Vec dir(t.dim());
    for (int k = 0; k < t.dim(); ++k) dir(k) = rng.normal();
    dir.normalize();
    out.push_back({bump_field(t.eval(u, v).x, radius, dir), eps_values[i % eps_values.size()]});
  }
  return out;
}

ParamSurface flat_disk(const Plane2& plane, double radius, QuadratureSpec q) {
  const Vec e1 = plane.e1();
  const Vec e2 = plane.e2();
  auto fn = [e1, e2](double r, double th) {
    const double c = std::cos(th);
    const double s = std::sin(th);
    return ChartJet{r * (c * e1 + s * e2), c * e1 + s * e2, r * (-s * e1 + c * e2)};
  };
  return ParamSurface::from_function(plane.dim(), fn, Rect{0.0, radius, 0.0, 2.0 * kPi}, 1, 1, std::move(q));
}

ParamSurface round_sphere(const Mat& frame, const Vec& center, double radius, QuadratureSpec q) {
  if (frame.cols() != 3) fail(ErrorCode::InvalidArgument, "sphere frame must have three columns");
  auto fn = [frame, center, radius](double phi, double th) {
    const Vec3 n(std::sin(phi) * std::cos(th), std::sin(phi) * std::sin(th), std::cos(phi));
    const Vec3 dphi(std::cos(phi) * std::cos(th), std::cos(phi) * std::sin(th), -std::sin(phi));
    const Vec3 dth(-std::sin(phi) * std::sin(th), std::sin(phi) * std::cos(th), 0.0);
    return ChartJet{center + radius * frame * n, radius * frame * dphi, radius * frame * dth};
  };
  return ParamSurface::from_function(static_cast<int>(frame.rows()), fn, Rect{0.0, kPi, 0.0, 2.0 * kPi}, 1, 1,
                                     std::move(q));
}

ParamSurface cylinder_patch(const Mat& frame, const Vec& center, double radius, double h, QuadratureSpec q) {
  if (frame.cols() != 3) fail(ErrorCode::InvalidArgument, "cylinder frame must have three columns");
  auto fn = [frame, center, radius](double th, double z) {
    const Vec3 p(radius * std::cos(th), radius * std::sin(th), z);
    const Vec3 dth(-radius * std::sin(th), radius * std::cos(th), 0.0);
    return ChartJet{center + frame * p, frame * dth, frame.col(2)};
  };
  return ParamSurface::from_function(static_cast<int>(frame.rows()), fn, Rect{0.0, 2.0 * kPi, -h, h}, 1, 1,
                                     std::move(q));
}

}  // namespace tclab
