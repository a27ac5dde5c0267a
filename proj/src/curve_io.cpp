#include "tclab/curve_io.hpp"

#include "tclab/errors.hpp"

#include <fstream>
#include <sstream>

namespace tclab {

namespace {

using nlohmann::json;

int int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    fail(ErrorCode::ParseError, std::string("curve spec: '") + key + "' must be an integer");
  return j[key].get<int>();
}

Vec vector_entry(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(ErrorCode::ParseError, "curve spec: " + where + " must be an array of " + std::to_string(n) + " numbers");
  Vec v(n);
  for (int d = 0; d < n; ++d) {
    if (!j[d].is_number()) fail(ErrorCode::ParseError, "curve spec: " + where + " has a non-numeric entry");
    v(d) = j[d].get<double>();
  }
  return v;
}

json vector_json(const Vec& v) {
  json out = json::array();
  for (int d = 0; d < v.size(); ++d) out.push_back(v(d));
  return out;
}

}  // namespace

WindingCurve curve_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::ParseError, "curve spec must be a JSON object");
  const int q = int_field(j, "Q");
  const int n = int_field(j, "n");
  const int orientation = int_field(j, "orientation");
  if (q < 1) fail(ErrorCode::ParseError, "curve spec: Q must be positive");
  if (n < 1) fail(ErrorCode::ParseError, "curve spec: n must be positive");
  if (orientation != 1 && orientation != -1) fail(ErrorCode::ParseError, "curve spec: orientation must be +1 or -1");
  if (!j.contains("rho") || !j["rho"].is_number()) fail(ErrorCode::ParseError, "curve spec: 'rho' must be a number");
  const double rho = j["rho"].get<double>();
  const bool has_samples = j.contains("samples");
  const bool has_fourier = j.contains("fourier");
  if (has_samples == has_fourier)
    fail(ErrorCode::ParseError, "curve spec: exactly one of 'samples' and 'fourier' is required");
  if (has_samples) {
    const json& s = j["samples"];
    if (!s.is_array() || s.empty()) fail(ErrorCode::ParseError, "curve spec: 'samples' must be a non-empty array");
    Mat samples(n, s.size());
    for (std::size_t k = 0; k < s.size(); ++k)
      samples.col(k) = vector_entry(s[k], n, "samples[" + std::to_string(k) + "]");
    return WindingCurve::from_samples(q, rho, samples, orientation);
  }
  const json& f = j["fourier"];
  if (!f.is_object() || !f.contains("alpha") || !f.contains("beta") || !f["alpha"].is_array() ||
      !f["beta"].is_array())
    fail(ErrorCode::ParseError, "curve spec: 'fourier' needs arrays 'alpha' and 'beta'");
  const json& a = f["alpha"];
  const json& b = f["beta"];
  if (a.empty() || b.size() + 1 != a.size())
    fail(ErrorCode::ParseError, "curve spec: 'alpha' needs N+1 entries and 'beta' N entries");
  const int n_max = static_cast<int>(b.size());
  Mat alpha(n, n_max + 1);
  Mat beta = Mat::Zero(n, n_max + 1);
  for (int i = 0; i <= n_max; ++i) alpha.col(i) = vector_entry(a[i], n, "alpha[" + std::to_string(i) + "]");
  for (int i = 1; i <= n_max; ++i) beta.col(i) = vector_entry(b[i - 1], n, "beta[" + std::to_string(i - 1) + "]");
  return WindingCurve::from_fourier(FourierSeries(q, alpha, beta), rho, orientation);
}

json curve_to_json(const WindingCurve& z) {
  json j;
  j["Q"] = z.Q();
  j["n"] = z.n();
  j["rho"] = z.rho();
  j["orientation"] = z.orientation();
  if (z.sample_source()) {
    json s = json::array();
    for (int k = 0; k < z.M(); ++k) s.push_back(vector_json(z.samples().col(k)));
    j["samples"] = std::move(s);
  } else {
    json a = json::array();
    json b = json::array();
    const FourierSeries& f = z.series();
    for (int i = 0; i <= f.N(); ++i) a.push_back(vector_json(f.alpha().col(i)));
    for (int i = 1; i <= f.N(); ++i) b.push_back(vector_json(f.beta().col(i)));
    j["fourier"] = {{"alpha", std::move(a)}, {"beta", std::move(b)}};
  }
  return j;
}

WindingCurve read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open curve spec " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, "curve spec " + path + ": " + e.what());
  }
  return curve_from_json(j);
}

void write_curve_file(const std::string& path, const WindingCurve& z) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ParseError, "cannot write curve spec " + path);
  out << curve_to_json(z).dump(2) << '\n';
}

}  // namespace tclab
