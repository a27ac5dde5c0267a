#include "tclab/runner.hpp"

#include "tclab/curve_io.hpp"
#include "tclab/decomposition.hpp"
#include "tclab/epiperimetric.hpp"
#include "tclab/errors.hpp"
#include "tclab/families.hpp"
#include "tclab/flat_homotopy.hpp"
#include "tclab/monotonicity.hpp"
#include "tclab/random.hpp"
#include "tclab/semicalibration.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

namespace tclab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

const std::map<std::string, std::set<std::string>>& known_fields() {
  static const std::map<std::string, std::set<std::string>> fields = {
      {"epi",
       {"Q", "n", "rho", "amplitudes", "mode_multiples", "modes", "random", "curves", "eps_target", "delta", "eps_bar"}},
      {"decay",
       {"source", "Q", "n", "mode", "mode_multiple", "amplitude", "r0", "r_min", "ratio", "count", "constants", "e0",
        "budget", "c02_budget", "exponent_tol", "closed_form_tol"}},
      {"flat", {"Q", "n", "mode", "mode_multiple", "amplitude", "r0", "count", "ratios", "stability"}},
      {"calib", {"surface", "dim", "form_scale", "omega", "twist", "probes", "eps", "comass_samples"}},
      {"split", {"n", "r", "components", "planes", "c", "gamma", "theta_min", "core_fraction"}},
  };
  return fields;
}

[[noreturn]] void config_fail(const json& s, const std::string& what) {
  const std::string name = s.contains("name") && s["name"].is_string() ? s["name"].get<std::string>() : "?";
  fail(ErrorCode::ConfigError, "scenario '" + name + "': " + what);
}

double num(const json& s, const char* key, double def) {
  if (!s.contains(key)) return def;
  if (!s[key].is_number()) config_fail(s, std::string("field '") + key + "' must be a number");
  return s[key].get<double>();
}

int integer(const json& s, const char* key, int def) {
  if (!s.contains(key)) return def;
  if (!s[key].is_number_integer()) config_fail(s, std::string("field '") + key + "' must be an integer");
  return s[key].get<int>();
}

std::string text(const json& s, const char* key, const std::string& def) {
  if (!s.contains(key)) return def;
  if (!s[key].is_string()) config_fail(s, std::string("field '") + key + "' must be a string");
  return s[key].get<std::string>();
}

std::vector<double> num_list(const json& s, const char* key, std::vector<double> def) {
  if (!s.contains(key)) return def;
  const json& v = s[key];
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) config_fail(s, std::string("field '") + key + "' must be a number or an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) config_fail(s, std::string("field '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> int_list(const json& s, const char* key, std::vector<int> def) {
  if (!s.contains(key)) return def;
  const json& v = s[key];
  if (v.is_number_integer()) return {v.get<int>()};
  if (!v.is_array()) config_fail(s, std::string("field '") + key + "' must be an integer or an array of integers");
  std::vector<int> out;
  for (const json& x : v) {
    if (!x.is_number_integer()) config_fail(s, std::string("field '") + key + "' must hold integers");
    out.push_back(x.get<int>());
  }
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

std::string join(const std::vector<int>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) fail(ErrorCode::InvalidArgument, "CSV row width does not match the header");
    rows_.push_back(std::move(cells));
  }

  std::string str(const std::string& trailer) const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    out += "# " + trailer + "\n";
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Context {
  const json& s;
  std::string name;
  Rng rng;
  int order;
  fs::path base;
  std::string trailer;
};

/// Coefficient magnitudes per index: |alpha_i|^2 + |beta_i|^2.
std::vector<int> active_modes(const FourierSeries& f) {
  std::vector<int> out;
  double scale = 0.0;
  for (int i = 1; i <= f.N(); ++i) scale = std::max(scale, std::hypot(f.alpha().col(i).norm(), f.beta().col(i).norm()));
  for (int i = 1; i <= f.N(); ++i)
    if (std::hypot(f.alpha().col(i).norm(), f.beta().col(i).norm()) > 1e-13 * scale && scale > 0.0) out.push_back(i);
  return out;
}

double max_amplitude(const FourierSeries& f) {
  double a = 0.0;
  for (int i = 1; i <= f.N(); ++i) a = std::max(a, std::hypot(f.alpha().col(i).norm(), f.beta().col(i).norm()));
  return a;
}

int single_mode_index(const Context& c, int q) {
  if (c.s.contains("mode")) return integer(c.s, "mode", 0);
  return integer(c.s, "mode_multiple", 2) * q;
}

ScenarioOutput run_epi(Context& c) {
  const json& s = c.s;
  EpiOptions opt;
  opt.order = c.order;
  opt.eps_target = num(s, "eps_target", 0.05);
  opt.delta = num(s, "delta", 0.1);
  opt.eps_bar = num(s, "eps_bar", 1e-2);
  const std::vector<int> qs = int_list(s, "Q", {1});
  const int n = integer(s, "n", 1);
  const double rho = num(s, "rho", 1.0);
  const std::vector<double> amps = num_list(s, "amplitudes", {1e-2});
  for (int q : qs)
    if (q < 1) config_fail(s, "Q must be positive");
  if (n < 1) config_fail(s, "n must be positive");

  struct Item {
    WindingCurve z;
    std::string modes;
    double amplitude;
  };
  std::vector<Item> items;
  if (s.contains("mode_multiples") || s.contains("modes")) {
    const bool multiples = s.contains("mode_multiples");
    const std::vector<int> modes = int_list(s, multiples ? "mode_multiples" : "modes", {});
    for (int q : qs)
      for (int m : modes)
        for (double a : amps) {
          const int i = multiples ? m * q : m;
          items.push_back({single_mode_curve(q, n, i, a, rho), std::to_string(i), a});
        }
  }
  if (s.contains("random")) {
    const json& r = s["random"];
    if (!r.is_object()) config_fail(s, "field 'random' must be an object");
    RandomCurveOptions ro;
    const int count = integer(r, "count", 10);
    const std::vector<double> lip = num_list(r, "lip", {ro.lip_lo, ro.lip_hi});
    if (lip.size() != 2) config_fail(s, "random.lip must be [lo, hi]");
    ro.lip_lo = lip[0];
    ro.lip_hi = lip[1];
    ro.max_modes = integer(r, "max_modes", ro.max_modes);
    for (int q : qs)
      for (int k = 0; k < count; ++k) {
        std::vector<int> modes;
        WindingCurve z = random_multimode_curve(q, n, c.rng, ro, &modes);
        const double a = max_amplitude(z.series());
        items.push_back({std::move(z), join(modes, ';'), a});
      }
  }
  if (s.contains("curves")) {
    if (!s["curves"].is_array()) config_fail(s, "field 'curves' must be an array of paths");
    for (const json& p : s["curves"]) {
      if (!p.is_string()) config_fail(s, "curve paths must be strings");
      const fs::path path = fs::path(p.get<std::string>()).is_absolute() ? fs::path(p.get<std::string>())
                                                                          : c.base / p.get<std::string>();
      WindingCurve z = read_curve_file(path.string());
      const double a = max_amplitude(z.series());
      std::string modes = join(active_modes(z.series()), ';');
      items.push_back({std::move(z), std::move(modes), a});
    }
  }

  Csv csv({"Q", "n", "modes", "amplitude", "raw_excess", "optimal_excess", "cone_gap", "competitor_gap", "ratio",
           "verdict"});
  ScenarioOutput out;
  double max_ratio = 0.0;
  for (const Item& it : items) {
    const EpiperimetricVerdict v = epiperimetric_gap(it.z, opt);
    max_ratio = std::max(max_ratio, v.ratio);
    csv.row({std::to_string(it.z.Q()), std::to_string(it.z.n()), it.modes, format_double(it.amplitude),
             format_double(v.raw_excess), format_double(v.optimal_excess), format_double(v.cone_gap),
             format_double(v.competitor_gap), format_double(v.ratio), verdict(v.pass)});
    (v.pass ? out.summary.pass : out.summary.fail) += 1;
  }
  if (!items.empty()) out.summary.epsilon13 = 1.0 - max_ratio;
  out.file_name = c.name + ".csv";
  out.content = csv.str(c.trailer);
  return out;
}

DecayConstants read_constants(const json& s) {
  DecayConstants d;
  if (!s.contains("constants")) return d;
  const json& k = s["constants"];
  if (!k.is_object()) config_fail(s, "field 'constants' must be an object");
  d.epsilon12 = num(k, "epsilon12", d.epsilon12);
  d.alpha0 = num(k, "alpha0", d.alpha0);
  d.cbar = num(k, "cbar", d.cbar);
  d.eps = num(k, "eps", d.eps);
  return d;
}

/// Least C over pairs ending at each radius.
std::vector<double> envelope_needs(const MassProfile& p, double b, double eps) {
  std::vector<double> need(p.size(), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      need[j] = std::max(need[j], (p.e[i] - std::pow(p.radii[i] / p.radii[j], b) * p.e[j]) / std::pow(p.radii[j], eps));
  return need;
}

ScenarioOutput run_decay(Context& c) {
  const json& s = c.s;
  const std::string source = text(s, "source", "harmonic");
  const double budget = num(s, "budget", 100.0);
  Csv csv({"r", "f", "e", "deviation", "envelope_c", "verdict"});
  ScenarioOutput out;
  auto emit = [&](const MassProfile& p, const std::vector<std::string>& dev, const std::vector<double>& need,
                  bool pass) {
    for (std::size_t k = 0; k < p.size(); ++k)
      csv.row({format_double(p.radii[k]), format_double(p.mass[k]), format_double(p.e[k]), dev[k],
               format_double(need[k]), verdict(pass)});
    (pass ? out.summary.pass : out.summary.fail) += 1;
  };

  if (source == "ode") {
    DecayConstants d = read_constants(s);
    if (!s.contains("constants")) d.cbar = 0.05, d.eps = 0.5;
    const double r0 = num(s, "r0", 1.0);
    const double r_min = num(s, "r_min", 1e-3);
    const int count = integer(s, "count", 200);
    const double e0 = num(s, "e0", 0.05);
    const int q = integer(s, "Q", 1);
    if (count < 2 || !(r_min > 0.0) || !(r0 > r_min)) config_fail(s, "ode grid needs count >= 2 and 0 < r_min < r0");
    const std::vector<double> radii = geometric_radii(r0, std::pow(r_min / r0, 1.0 / (count - 1)), count);
    const MassProfile p = synthesize_decay_profile(d, e0, r0, radii, q);
    const DecayReport rep = decay_envelope(p, d, budget);
    const double closed = closed_form_decay_constant(d, r0);
    const double tol = num(s, "closed_form_tol", 0.05);
    const bool close = closed > 0.0 ? std::abs(rep.c - closed) <= tol * closed : rep.c <= 1e-12;
    emit(p, std::vector<std::string>(p.size(), ""), envelope_needs(p, d.a() - 2.0, d.eps), rep.pass && close);
    out.summary.c = rep.c;
  } else if (source == "harmonic" || source == "cone") {
    const int q = integer(s, "Q", 1);
    const int n = integer(s, "n", 1);
    const int mode = single_mode_index(c, q);
    const double amp = num(s, "amplitude", 0.02);
    const double r0 = num(s, "r0", 1.0);
    const double ratio = num(s, "ratio", 0.5);
    const int count = integer(s, "count", 8);
    if (q < 1 || n < 1 || mode < 1 || count < 2) config_fail(s, "need Q, n, mode >= 1 and count >= 2");
    const WindingCurve link = single_mode_curve(q, n, mode, amp);
    const std::vector<double> radii = geometric_radii(r0, ratio, count);
    const ParamSurface t = source == "harmonic"
                               ? harmonic_extension(link.series(), 1.0, Mat(), 1, 0.5, c.order)
                               : cone_surface(ConeOverCurve(link, 1.0, true), c.order);
    const MassProfile p = mass_profile(t, radii, q);
    std::vector<double> shell(count, 0.0);
    std::vector<std::string> dev(count, "");
    for (int k = 1; k < count; ++k) {
      shell[k] = deviation_integral(t, radii[k - 1], radii[k]);
      dev[k] = format_double(shell[k]);
    }
    std::vector<std::vector<double>> table(count, std::vector<double>(count, 0.0));
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j) table[i][j] = table[i][j - 1] + shell[j];
    if (source == "cone") {
      double worst_d = 0.0;
      double worst_e = 0.0;
      for (int k = 1; k < count; ++k) {
        worst_d = std::max(worst_d, shell[k]);
        worst_e = std::max(worst_e, std::abs(p.e[k] - p.e[0]));
      }
      emit(p, dev, std::vector<double>(count, 0.0), worst_d <= 1e-9 && worst_e <= 1e-9);
    } else {
      const MonotonicityReport mono = check_almost_monotonicity(p, table, num(s, "c02_budget", 10.0),
                                                                read_constants(s).alpha0);
      const double b = fit_decay_exponent(p);
      DecayConstants d = read_constants(s);
      d.epsilon12 = 1.0 - 2.0 / (b + 2.0);
      const DecayReport rep = decay_envelope(p, d, budget);
      const double expected = 2.0 * (static_cast<double>(mode) / q - 1.0);
      const bool exponent_ok = std::abs(b - expected) <= num(s, "exponent_tol", 0.05) * std::abs(expected);
      emit(p, dev, envelope_needs(p, b, d.eps), mono.pass && rep.pass && exponent_ok);
      out.summary.c = rep.c;
    }
  } else {
    config_fail(s, "decay source must be ode, harmonic or cone");
  }
  out.file_name = c.name + ".csv";
  out.content = csv.str(c.trailer);
  return out;
}

ScenarioOutput run_flat(Context& c) {
  const json& s = c.s;
  const int q = integer(s, "Q", 1);
  const int n = integer(s, "n", 1);
  const int mode = single_mode_index(c, q);
  const double amp = num(s, "amplitude", 0.02);
  const double r0 = num(s, "r0", 1.0);
  const int count = integer(s, "count", 4);
  const std::vector<double> ratios = num_list(s, "ratios", {0.5, 0.25});
  const double stability = num(s, "stability", 0.1);
  if (q < 1 || n < 1 || mode < 1 || count < 2 || ratios.empty()) config_fail(s, "need Q, n, mode >= 1, count >= 2");
  for (double x : ratios)
    if (!(x > 0.0 && x < 1.0)) config_fail(s, "ratios must lie in (0, 1)");
  const WindingCurve link = single_mode_curve(q, n, mode, amp);
  const ParamSurface t = harmonic_extension(link.series(), 1.0, Mat(), 1, 0.5, c.order);

  struct Row {
    double r, s;
    FlatEstimate est;
  };
  std::vector<std::vector<Row>> sweeps;
  std::vector<RateFit> fits;
  for (double ratio : ratios) {
    std::vector<Row> rows;
    std::vector<double> xs, ys;
    for (int k = 0; k < count; ++k) {
      const double r = r0 * std::ldexp(1.0, -k);
      rows.push_back({r, ratio * r, radial_homotopy_filling(t, ratio * r, r)});
      xs.push_back(r);
      ys.push_back(rows.back().est.bound);
    }
    fits.push_back(fit_rate(xs, ys));
    sweeps.push_back(std::move(rows));
  }
  double kmin = fits[0].kappa;
  double kmax = fits[0].kappa;
  for (const RateFit& f : fits) kmin = std::min(kmin, f.kappa), kmax = std::max(kmax, f.kappa);
  const bool stable = kmin > 0.0 && (kmax - kmin) <= stability * kmax;

  Csv csv({"r", "s", "bound", "filling", "residual", "verdict"});
  ScenarioOutput out;
  for (std::size_t j = 0; j < sweeps.size(); ++j)
    for (const Row& row : sweeps[j]) {
      const bool pass = stable && row.est.bound <= fits[j].c * std::pow(row.r, fits[j].kappa) * (1.0 + 1e-12);
      csv.row({format_double(row.r), format_double(row.s), format_double(row.est.bound),
               format_double(row.est.filling), format_double(row.est.residual), verdict(pass)});
      (pass ? out.summary.pass : out.summary.fail) += 1;
    }
  out.summary.gamma0 = kmin;
  out.file_name = c.name + ".csv";
  out.content = csv.str(c.trailer);
  return out;
}

ScenarioOutput run_calib(Context& c) {
  const json& s = c.s;
  const std::string surface = text(s, "surface", "disk");
  const double scale = num(s, "form_scale", 1.0);
  const int probes = integer(s, "probes", 100);
  const std::vector<double> eps = num_list(s, "eps", {1e-1, 1e-2, 1e-3, 1e-4});
  const int samples = integer(s, "comass_samples", 1000);
  const QuadratureSpec quad{c.order, 8, 16, {}};

  std::optional<ParamSurface> t;
  TwoFormField form;
  double omega = 0.0;
  Rect centers;
  double r_lo = 0.2;
  double r_hi = 0.4;
  if (surface == "disk" || surface == "twisted_disk") {
    const int dim = integer(s, "dim", 3);
    if (dim < 3) config_fail(s, "dim must be at least 3");
    t = flat_disk(Plane2::coordinate(dim), 1.0, quad);
    if (surface == "disk") {
      form = constant_form(TwoCovector::basis(dim, 0, 1));
    } else {
      const double k = num(s, "twist", 2.0);
      form = normal_field_form(Mat::Identity(dim, 3), Vec::Zero(dim), twisted_normal(k));
      omega = k;
    }
    centers = Rect{0.0, 0.5, 0.0, 2.0 * kPi};
  } else if (surface == "equator") {
    t = round_sphere(Mat::Identity(4, 3), Vec::Zero(4), 1.0, quad);
    form = normal_field_form(Mat::Identity(4, 3), Vec::Zero(4), radial_normal());
    omega = 3.0;
    centers = Rect{0.3, kPi - 0.3, 0.0, 2.0 * kPi};
    r_hi = 0.5;
  } else {
    config_fail(s, "calib surface must be disk, twisted_disk or equator");
  }
  omega = num(s, "omega", omega);
  if (scale != 1.0) {
    const FormField base = form.omega;
    const auto base_d = form.d;
    form.omega = [base, scale](const Vec& x) { return base(x) * scale; };
    form.d = base_d ? std::function<ThreeCovector(const Vec&)>(
                          [base_d, scale](const Vec& x) { return base_d(x) * scale; })
                    : nullptr;
  }

  Csv csv({"probe_id", "mass_t", "mass_t_plus_ds", "mass_s", "omega", "slack", "verdict"});
  ScenarioOutput out;
  out.file_name = c.name + ".csv";
  const int dim = t->dim();
  std::vector<Vec> pts;
  for (int k = 0; k < samples; ++k) {
    Vec x(dim);
    for (int j = 0; j < dim; ++j) x(j) = c.rng.uniform(-1.5, 1.5);
    pts.push_back(std::move(x));
  }
  const ComassReport cm = comass_field_check(form, pts);
  if (!cm.pass) {
    csv.row({"comass@" + std::to_string(cm.witness.value_or(0)), "", "", "", format_double(omega),
             format_double(1.0 - cm.max_comass), "FAIL"});
    out.summary.fail = 1;
    out.content = csv.str(c.trailer);
    return out;
  }
  const double defect = calibration_defect(*t, form);
  if (!(defect < 1e-8)) {
    csv.row({"defect", "", "", "", format_double(omega), format_double(-defect), "FAIL"});
    out.summary.fail = 1;
    out.content = csv.str(c.trailer);
    return out;
  }
  const std::vector<Probe> family = random_probes(*t, centers, r_lo, r_hi, eps, probes, c.rng);
  const ProbeReport rep = almost_minimality_probe(*t, omega, family);
  for (const ProbeResult& r : rep.rows) {
    csv.row({std::to_string(r.id), format_double(r.mass_t), format_double(r.mass_perturbed), format_double(r.mass_s),
             format_double(r.omega), format_double(r.slack), verdict(r.pass)});
    (r.pass ? out.summary.pass : out.summary.fail) += 1;
  }
  out.content = csv.str(c.trailer);
  return out;
}

Plane2 read_plane(const json& s, const json& p, int dim) {
  if (!p.is_array() || p.size() != 2) config_fail(s, "a plane is a pair of vectors");
  Vec a(dim), b(dim);
  for (int k = 0; k < 2; ++k) {
    const json& v = p[k];
    if (!v.is_array() || static_cast<int>(v.size()) != dim) config_fail(s, "plane vectors must have n + 2 entries");
    for (int j = 0; j < dim; ++j) {
      if (!v[j].is_number()) config_fail(s, "plane vectors must hold numbers");
      (k == 0 ? a : b)(j) = v[j].get<double>();
    }
  }
  return Plane2(a, b);
}

json plane_json(const Plane2& p) {
  json e1 = json::array(), e2 = json::array();
  for (int k = 0; k < p.dim(); ++k) e1.push_back(p.e1()(k)), e2.push_back(p.e2()(k));
  return json::array({e1, e2});
}

ScenarioOutput run_split(Context& c) {
  const json& s = c.s;
  const int n = integer(s, "n", 2);
  const int dim = n + 2;
  const double r = num(s, "r", 0.02);
  ClusterOptions opt;
  opt.c = num(s, "c", opt.c);
  opt.gamma = num(s, "gamma", opt.gamma);
  opt.theta_min = num(s, "theta_min", opt.theta_min);
  opt.core_fraction = num(s, "core_fraction", opt.core_fraction);
  if (!s.contains("components") || !s["components"].is_array() || s["components"].empty())
    config_fail(s, "split needs a nonempty 'components' array");

  std::vector<WindingCurve> curves;
  int expected_q = 0;
  int index = 0;
  for (const json& comp : s["components"]) {
    if (!comp.is_object()) config_fail(s, "components must be objects");
    const int q = integer(comp, "Q", 1);
    if (q < 1) config_fail(s, "component Q must be positive");
    const Plane2 plane = comp.contains("plane")
                             ? read_plane(s, comp["plane"], dim)
                             : Plane2::coordinate(dim, (2 * index) % dim, (2 * index + 1) % dim);
    const std::vector<int> modes = int_list(comp, "modes", {});
    const double amp = num(comp, "amplitude", 0.05);
    const double rho = num(comp, "rho", r);
    int top = 1;
    for (int m : modes) top = std::max(top, m);
    FourierSeries f(q, n, top);
    for (int m : modes) {
      Vec dir(n);
      for (int k = 0; k < n; ++k) dir(k) = c.rng.normal();
      f.set_alpha(m, amp * dir / dir.norm());
    }
    curves.push_back(WindingCurve::from_fourier(f, rho).with_frame(complete_frame(plane)));
    expected_q += q;
    ++index;
  }
  std::vector<Plane2> planes;
  if (s.contains("planes")) {
    if (!s["planes"].is_array()) config_fail(s, "field 'planes' must be an array");
    for (const json& p : s["planes"]) planes.push_back(read_plane(s, p, dim));
  } else {
    planes = candidate_planes(curves, opt);
  }

  ScenarioOutput out;
  out.file_name = c.name + ".json";
  const PlaneCluster cluster = cluster_by_planes(curves, planes, r, opt);
  json doc;
  doc["scenario"] = c.name;
  doc["expected_q"] = expected_q;
  doc["tube_width"] = cluster.tube_width;
  doc["unassigned_points"] = cluster.unassigned_points;
  json clusters = json::array();
  bool overall = cluster.pass;
  try {
    const SplitResult split = split_current(curves, cluster);
    for (const CurveGroup& g : split.groups) {
      std::vector<WindingCurve> members;
      int member_q = 0;
      for (int m : g.members) members.push_back(curves[m]), member_q += curves[m].Q();
      const IrreducibilityVerdict irr = irreducibility_check(members, r);
      const bool ok = g.multiplicity == member_q;
      json partition = json::array();
      for (const auto& part : irr.partition) partition.push_back(part);
      clusters.push_back({{"plane", plane_json(cluster.planes[g.plane])},
                          {"multiplicity", g.multiplicity},
                          {"members", g.members},
                          {"mass", g.mass},
                          {"cone_mass", g.cone_mass},
                          {"irreducible", irr.irreducible},
                          {"components", irr.components},
                          {"partition", partition},
                          {"verdict", verdict(ok)}});
      (ok ? out.summary.pass : out.summary.fail) += 1;
    }
    doc["total_q"] = split.total_q;
    doc["total_mass"] = split.total_mass;
    doc["leak"] = split.leak;
    overall = overall && split.pass && split.total_q == expected_q;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MassLeak) throw;
    doc["error"] = e.what();
    overall = false;
  }
  if (!overall) out.summary.fail += 1;
  doc["clusters"] = clusters;
  doc["verdict"] = verdict(overall);
  doc["config_hash"] = c.trailer;
  out.content = doc.dump(2) + "\n";
  return out;
}

bool safe_name(const std::string& name) {
  if (name.empty() || name == "summary") return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
  }) && name.front() != '.';
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : "-"; }

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open config " + path.string());
  json config;
  try {
    config = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  validate_config(config);
  return config;
}

void validate_config(const json& config) {
  if (!config.is_object()) fail(ErrorCode::ConfigError, "config must be a JSON object");
  if (!config.contains("scenarios") || !config["scenarios"].is_array())
    fail(ErrorCode::ConfigError, "config needs a 'scenarios' array");
  for (const char* key : {"seed", "quad_order"})
    if (config.contains(key) && !config[key].is_number_integer())
      fail(ErrorCode::ConfigError, std::string("'") + key + "' must be an integer");
  std::set<std::string> names;
  for (const json& s : config["scenarios"]) {
    if (!s.is_object()) fail(ErrorCode::ConfigError, "every scenario must be an object");
    if (!s.contains("name") || !s["name"].is_string()) fail(ErrorCode::ConfigError, "every scenario needs a name");
    const std::string name = s["name"].get<std::string>();
    if (!safe_name(name)) config_fail(s, "names may use letters, digits, '_', '-' and '.'");
    if (!names.insert(name).second) config_fail(s, "duplicate scenario name");
    const std::string kind = text(s, "kind", "");
    const auto it = known_fields().find(kind);
    if (it == known_fields().end()) config_fail(s, "unknown kind '" + kind + "'");
    for (const auto& [key, value] : s.items()) {
      if (key == "name" || key == "kind" || key == "seed") continue;
      if (!it->second.count(key)) config_fail(s, "unknown field '" + key + "' for kind " + kind);
    }
    if (s.contains("seed") && !s["seed"].is_number_unsigned()) config_fail(s, "seed must be a nonnegative integer");
  }
}

std::uint64_t config_hash(const json& scenario, std::uint64_t seed, int quad_order) {
  return fnv1a(scenario.dump() + "|seed=" + std::to_string(seed) + "|quad_order=" + std::to_string(quad_order));
}

std::uint64_t scenario_seed(const json& scenario, std::uint64_t run_seed) {
  if (scenario.contains("seed")) return scenario["seed"].get<std::uint64_t>();
  return splitmix64(run_seed ^ fnv1a(scenario["name"].get<std::string>()));
}

ScenarioOutput run_scenario(const json& scenario, std::uint64_t run_seed, int quad_order, const fs::path& base_dir) {
  const std::string name = scenario["name"].get<std::string>();
  const std::string kind = scenario["kind"].get<std::string>();
  const std::uint64_t seed = scenario_seed(scenario, run_seed);
  Context ctx{scenario, name, Rng(seed), quad_order, base_dir,
              "config_hash=" + hex64(config_hash(scenario, run_seed, quad_order)) + " seed=" + std::to_string(seed)};
  ScenarioOutput out;
  try {
    if (kind == "epi") out = run_epi(ctx);
    else if (kind == "decay") out = run_decay(ctx);
    else if (kind == "flat") out = run_flat(ctx);
    else if (kind == "calib") out = run_calib(ctx);
    else out = run_split(ctx);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::ParseError) throw;
    fail(ErrorCode::ScenarioError, "scenario '" + name + "': " + e.what());
  }
  out.summary.scenario = name;
  out.summary.kind = kind;
  return out;
}

RunResult run_config(const json& config, const RunOptions& opts) {
  validate_config(config);
  const std::uint64_t seed = opts.seed ? *opts.seed : config.value("seed", std::uint64_t{0});
  const int order = opts.quad_order ? *opts.quad_order : config.value("quad_order", 32);
  if (order < 2 || order > 128) fail(ErrorCode::ConfigError, "quad order must lie in [2, 128]");
  const json& list = config["scenarios"];
  const std::size_t count = list.size();
  RunResult result;
  result.scenarios.resize(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        result.scenarios[i] = run_scenario(list[i], seed, order, opts.base_dir);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < count; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::ParseError) throw;
      result.scenarios[i].summary.scenario = list[i]["name"].get<std::string>();
      result.scenarios[i].summary.kind = list[i]["kind"].get<std::string>();
      result.scenarios[i].summary.error = e.what();
      result.scenarios[i].summary.fail += 1;
    }
  }

  fs::create_directories(opts.out_dir);
  for (const ScenarioOutput& s : result.scenarios) {
    if (s.file_name.empty()) continue;
    std::ofstream(opts.out_dir / s.file_name, std::ios::binary) << s.content;
  }
  Csv summary({"scenario", "kind", "pass", "fail", "epsilon13", "gamma0", "C"});
  for (const ScenarioOutput& s : result.scenarios) {
    const SummaryRow& r = s.summary;
    summary.row({r.scenario, r.kind, std::to_string(r.pass), std::to_string(r.fail), format_optional(r.epsilon13),
                 format_optional(r.gamma0), format_optional(r.c)});
    if (r.fail > 0) result.exit_code = 1;
  }
  std::ofstream(opts.out_dir / "summary.csv", std::ios::binary)
      << summary.str("config_hash=" + hex64(fnv1a(config.dump())) + " seed=" + std::to_string(seed));
  return result;
}

std::string format_summary(const std::vector<ScenarioOutput>& outputs) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-6s %6s %6s %12s %12s %12s\n", "scenario", "kind", "#pass", "#fail",
                "eps13", "gamma0", "C");
  os << line;
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", *v);
    return std::string(buf);
  };
  for (const ScenarioOutput& s : outputs) {
    const SummaryRow& r = s.summary;
    std::snprintf(line, sizeof line, "%-24s %-6s %6d %6d %12s %12s %12s\n", r.scenario.c_str(), r.kind.c_str(),
                  r.pass, r.fail, cell(r.epsilon13).c_str(), cell(r.gamma0).c_str(), cell(r.c).c_str());
    os << line;
    if (!r.error.empty()) os << "  error: " << r.error << "\n";
  }
  return os.str();
}

}  // namespace tclab
