// Acceptance criteria 1-10. Prints one line per criterion and exits nonzero
// if any of them fails.

#include "tclab/currents.hpp"
#include "tclab/decomposition.hpp"
#include "tclab/epiperimetric.hpp"
#include "tclab/errors.hpp"
#include "tclab/families.hpp"
#include "tclab/flat_homotopy.hpp"
#include "tclab/monotonicity.hpp"
#include "tclab/random.hpp"
#include "tclab/runner.hpp"
#include "tclab/semicalibration.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace tclab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) mx += std::log(x[k]), my += std::log(y[k]);
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (std::log(x[k]) - mx) * (std::log(y[k]) - my);
    sxx += (std::log(x[k]) - mx) * (std::log(x[k]) - mx);
  }
  return sxy / sxx;
}

// Length of the radially normalized link, integrated directly.
double spherical_link_length(const ConeOverCurve& c) {
  const int nodes = c.link.quadrature_nodes();
  const double h = 2.0 * kPi * c.link.Q() / nodes;
  double total = 0.0;
  Vec g, dg;
  for (int k = 0; k < nodes; ++k) {
    c.link_eval(k * h, g, dg);
    total += dg.norm();
  }
  return total * h;
}

Outcome cone_mass_identity() {
  Rng rng(101);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int q = 1 + k % 3;
    const int n = 1 + (k / 3) % 3;
    const ConeOverCurve c(random_spherical_link(q, n, rng), 1.0, true);
    const double length = spherical_link_length(c);
    worst = std::max(worst, std::abs(cone_mass(c) - 0.5 * length) / length);
  }
  return {worst <= 1e-8, fmt("50 links, worst |M(cone) - M(Z)/2| / M(Z) = %.3g", worst)};
}

Outcome epiperimetric_ratios() {
  double worst_single = 0.0;
  for (int q = 1; q <= 3; ++q)
    for (int k = 2; k <= 4; ++k)
      for (double a : {1e-3, 1e-2}) {
        const EpiperimetricVerdict v = epiperimetric_gap(single_mode_curve(q, 1, k * q, a));
        worst_single = std::max(worst_single, std::abs(v.ratio - 2.0 * k / (1.0 + k * k)));
      }
  Rng rng(2024);
  double worst_ratio = 0.0;
  int errors = 0;
  for (int k = 0; k < 200; ++k) {
    const WindingCurve z = random_multimode_curve(1 + k % 3, 1 + (k / 3) % 2, rng);
    try {
      worst_ratio = std::max(worst_ratio, epiperimetric_gap(z).ratio);
    } catch (const Error&) {
      ++errors;
    }
  }
  return {worst_single <= 0.05 && worst_ratio <= 0.95 && errors == 0,
          fmt("single-mode max |ratio - 2k/(1+k^2)| = %.3g; 200 random curves max ratio %.4f, %g errors",
              worst_single, worst_ratio, errors)};
}

Outcome pure_mode_q_excess() {
  double worst = 0.0;
  for (int q = 1; q <= 3; ++q)
    for (int n = 1; n <= 2; ++n)
      for (double eps : {1e-2, 1e-3}) {
        Vec dir = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
        const ExcessReport r = optimal_plane(single_mode_curve(q, n, q, eps, 1.0, dir));
        worst = std::max(worst, r.excess / std::pow(eps, 4));
      }
  return {worst <= 10.0, fmt("max optimal excess / eps^4 = %.3g (bound 10)", worst)};
}

Outcome first_variation_rate() {
  Rng rng(42);
  double worst = 1e9;
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 3 + trial % 2;
    const int kind = trial % 3;
    const Mat e = random_rotation(dim, rng.next()).leftCols(3);
    Vec c(dim);
    for (int k = 0; k < dim; ++k) c(k) = rng.uniform(-0.5, 0.5);
    const double radius = rng.uniform(0.6, 1.5);
    const ParamSurface full =
        kind == 0 ? round_sphere(e, c, radius)
        : kind == 1
            ? cylinder_patch(e, c, radius, 2.0)
            : ParamSurface::from_function(
                  dim, [e, c](double u, double v) { return ChartJet{c + e.col(0) * u + e.col(1) * v, e.col(0), e.col(1)}; },
                  Rect{-2, 2, -2, 2});
    const TwoFormField omega =
        normal_field_form(e, c, kind == 0   ? radial_normal()
                                : kind == 1 ? cylindrical_normal()
                                            : twisted_normal(rng.uniform(0.5, 3.0)));
    const double u = kind == 0 ? rng.uniform(0.8, 2.3) : kind == 1 ? rng.uniform(0, 2 * kPi) : rng.uniform(-0.5, 0.5);
    const double v = kind == 0 ? rng.uniform(0, 2 * kPi) : rng.uniform(-0.5, 0.5);
    const double rad = rng.uniform(0.3, 0.5) * (kind == 2 ? 1.0 : radius);
    const double du = kind == 2 ? 1.3 * rad : 1.3 * rad / radius;
    const double dv = kind == 0 ? 1.3 * rad / (radius * std::sin(u)) : 1.3 * rad;
    const ParamSurface t(full.chart_ptr(), Rect{u - du, u + du, v - dv, v + dv}, 1, 1, QuadratureSpec{32, 8, 8, {}});
    Vec a(dim);
    for (int k = 0; k < dim; ++k) a(k) = rng.normal();
    Mat b(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) b(i, j) = 0.5 * rng.normal();
    const std::vector<double> steps = {1e-2, 1e-3, 1e-4};
    const FirstVariation fv = first_variation_pair(t, omega, bump_field(full.eval(u, v).x, rad, a, b), steps);
    std::vector<double> err;
    for (double d : fv.differences) err.push_back(std::abs(d - fv.rhs));
    worst = std::min(worst, slope(steps, err));
  }
  return {worst >= 1.9, fmt("20 triples, smallest error slope %.3f", worst)};
}

Outcome almost_monotonicity() {
  Rng rng(7);
  const std::vector<double> radii = geometric_radii(1.0, 0.5, 6);
  const int count = static_cast<int>(radii.size());
  auto table_for = [&](const ParamSurface& t) {
    std::vector<std::vector<double>> d(count, std::vector<double>(count, 0.0));
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j) d[i][j] = deviation_integral(t, radii[i], radii[j]);
    return d;
  };
  double c02 = 0.0;
  bool all_pass = true;
  for (int k = 0; k < 20; ++k) {
    const int q = 1 + k % 3;
    const WindingCurve z = random_multimode_curve(q, 1 + k % 2, rng);
    const ParamSurface t = harmonic_extension(z.series(), 1.0);
    const MonotonicityReport rep = check_almost_monotonicity(mass_profile(t, radii, q), table_for(t), 10.0, 1.0);
    c02 = std::max(c02, rep.c02);
    all_pass = all_pass && rep.pass;
  }
  double cone_worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const WindingCurve z = random_spherical_link(1 + k % 3, 1 + k % 2, rng);
    const ConeOverCurve c(z, 1.0, true);
    const ParamSurface t = cone_surface(c);
    const MassProfile p = mass_profile(t, radii, z.Q());
    const auto d = table_for(t);
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j)
        cone_worst = std::max({cone_worst, d[i][j], std::abs(p.e[j] - p.e[i])});
  }
  return {all_pass && c02 <= 10.0 && cone_worst <= 1e-9,
          fmt("fitted C02 = %.4g over 20 perturbed cones; exact cones max(D, |de|) = %.3g", c02, cone_worst)};
}

Outcome decay_rates() {
  double worst_closed = 0.0;
  for (double eps12 : {0.1, 0.2})
    for (double cbar : {0.02, 0.05}) {
      const DecayConstants d{eps12, 1.0, cbar, 0.3};
      const std::vector<double> radii = geometric_radii(1.0, std::pow(1e-3, 1.0 / 799), 800);
      const DecayReport rep = decay_envelope(synthesize_decay_profile(d, 0.01, 1.0, radii), d);
      const double closed = closed_form_decay_constant(d, 1.0);
      worst_closed = std::max(worst_closed, std::abs(rep.c - closed) / closed);
    }
  double worst_exp = 0.0;
  bool finite = true;
  for (int q = 1; q <= 3; ++q)
    for (int i : {q + 1, 2 * q, 3 * q}) {
      FourierSeries f(q, 1, i);
      f.set_alpha(i, Vec::Constant(1, 0.02));
      const MassProfile p = mass_profile(harmonic_extension(f, 1.0), geometric_radii(1.0, 0.5, 6), q);
      const double b = fit_decay_exponent(p);
      const double expected = 2.0 * (static_cast<double>(i) / q - 1.0);
      worst_exp = std::max(worst_exp, std::abs(b - expected) / expected);
      DecayConstants d;
      d.epsilon12 = 1.0 - 2.0 / (b + 2.0);
      const DecayReport rep = decay_envelope(p, d);
      finite = finite && std::isfinite(rep.c) && rep.pass;
    }
  return {worst_closed <= 0.05 && worst_exp <= 0.05 && finite,
          fmt("ODE fitted C vs closed form worst rel %.3g; harmonic exponent worst rel %.3g", worst_closed,
              worst_exp)};
}

Outcome radial_homotopy_rate() {
  double kmin = 1e9;
  double worst_spread = 0.0;
  for (const auto& [q, i] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 4}}) {
    const ParamSurface t = harmonic_extension(single_mode_curve(q, 1, i, 0.02).series(), 1.0);
    std::vector<double> kappas;
    for (double ratio : {0.5, 0.25}) {
      std::vector<double> rs, bounds;
      for (int k = 0; k < 4; ++k) {
        const double r = std::ldexp(1.0, -k);
        rs.push_back(r);
        bounds.push_back(radial_homotopy_filling(t, ratio * r, r).bound);
      }
      kappas.push_back(fit_rate(rs, bounds).kappa);
    }
    const auto [lo, hi] = std::minmax_element(kappas.begin(), kappas.end());
    kmin = std::min(kmin, *lo);
    worst_spread = std::max(worst_spread, (*hi - *lo) / *hi);
  }
  return {kmin > 0.0 && worst_spread <= 0.1,
          fmt("smallest kappa %.4f, largest relative spread between sweeps %.3g", kmin, worst_spread)};
}

Outcome probe_slack() {
  Rng rng(8);
  const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4};
  const ParamSurface disk = flat_disk(Plane2::coordinate(3), 1.0, {32, 8, 16, {}});
  const TwoFormField flat = constant_form(TwoCovector::basis(3, 0, 1));
  const double disk_defect = std::abs(calibration_defect(disk, flat));
  const ProbeReport d = almost_minimality_probe(disk, 0.0, random_probes(disk, Rect{0.0, 0.5, 0.0, 2 * kPi}, 0.2, 0.4, eps, 100, rng));

  const ParamSurface sphere = round_sphere(Mat::Identity(4, 3), Vec::Zero(4), 1.0, {32, 8, 16, {}});
  const TwoFormField radial = normal_field_form(Mat::Identity(4, 3), Vec::Zero(4), radial_normal());
  const double sphere_defect = std::abs(calibration_defect(sphere, radial));
  // Omega = 3 for the equator; it must dominate the comass of d omega on the sphere.
  const double omega = 3.0;
  double dmax = 0.0;
  for (int k = 0; k < 200; ++k) {
    Vec x = Vec::Zero(4);
    for (int j = 0; j < 3; ++j) x(j) = rng.normal();
    x /= x.norm();
    dmax = std::max(dmax, radial.exterior_derivative(x).norm());
  }
  const ProbeReport s = almost_minimality_probe(
      sphere, omega, random_probes(sphere, Rect{0.3, kPi - 0.3, 0.0, 2 * kPi}, 0.2, 0.5, eps, 100, rng));
  const bool pass = d.pass && d.rows.size() == 100 && disk_defect < 1e-10 && s.pass && s.rows.size() == 100 &&
                    dmax <= omega && sphere_defect < 1e-8;
  return {pass, fmt("disk Omega = 0 min slack %.3g; equator Omega = 3 (|d omega| <= %.6g) min slack %.3g", d.min_slack,
                    dmax, s.min_slack)};
}

Outcome orthogonal_split() {
  const double r = 0.02;
  FourierSeries f1(1, 2, 1);
  FourierSeries f2(2, 2, 4);
  f2.set_alpha(4, Vec::Constant(2, 0.03));
  const Plane2 p1 = Plane2::coordinate(4, 0, 1);
  const Plane2 p2 = Plane2::coordinate(4, 2, 3);
  const std::vector<WindingCurve> curves = {
      WindingCurve::from_fourier(f1, r).with_frame(complete_frame(p1)),
      WindingCurve::from_fourier(f2, r).with_frame(complete_frame(p2)),
  };
  const PlaneCluster cluster = cluster_by_planes(curves, {p1, p2}, r);
  const SplitResult split = split_current(curves, cluster);
  int sum = 0;
  for (const CurveGroup& g : split.groups) sum += g.multiplicity;
  return {split.pass && sum == 3 && split.groups.size() == 2 && split.leak <= 1e-9,
          fmt("sum Q_i = %g (expected 3), leak %.3g", sum, split.leak)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome reproducible_runs() {
  const nlohmann::json config = nlohmann::json::parse(R"({
    "seed": 99,
    "scenarios": [
      {"name": "epi", "kind": "epi", "Q": [1, 2], "random": {"count": 3}},
      {"name": "decay", "kind": "decay", "source": "harmonic", "Q": 2, "mode": 5},
      {"name": "flat", "kind": "flat", "Q": 1, "mode": 3, "count": 3, "ratios": [0.5]},
      {"name": "calib", "kind": "calib", "surface": "twisted_disk", "probes": 12},
      {"name": "split", "kind": "split", "components": [{"Q": 1, "modes": [2]}, {"Q": 1, "modes": [3]}]}
    ]})");
  const auto root = std::filesystem::temp_directory_path() / "tclab_acceptance_repro";
  std::filesystem::remove_all(root);
  RunOptions a;
  a.out_dir = root / "a";
  RunOptions b;
  b.out_dir = root / "b";
  b.jobs = 3;
  run_config(config, a);
  run_config(config, b);
  int files = 0;
  bool same = true;
  for (const auto& entry : std::filesystem::directory_iterator(a.out_dir)) {
    ++files;
    same = same && slurp(entry.path()) == slurp(b.out_dir / entry.path().filename());
  }
  std::filesystem::remove_all(root);
  return {same && files == 6, fmt("%g artifacts compared byte for byte", files)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"cone mass of spherical links", cone_mass_identity},
      {"epiperimetric ratios", epiperimetric_ratios},
      {"pure mode-Q excess", pure_mode_q_excess},
      {"first variation rate", first_variation_rate},
      {"almost monotonicity", almost_monotonicity},
      {"decay rates", decay_rates},
      {"radial homotopy rate", radial_homotopy_rate},
      {"almost minimality probes", probe_slack},
      {"orthogonal plane split", orthogonal_split},
      {"reproducible runs", reproducible_runs},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("raised ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu %-30s %s  %s (%.1fs)\n", k + 1, criteria[k].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
