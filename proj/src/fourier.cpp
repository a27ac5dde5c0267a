#include "tclab/fourier.hpp"

#include "tclab/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace tclab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

FourierSeries::FourierSeries(int q, int n, int n_max)
    : q_(q), alpha_(Mat::Zero(n, n_max + 1)), beta_(Mat::Zero(n, n_max + 1)) {
  if (q < 1 || n < 1 || n_max < 0) fail(ErrorCode::InvalidArgument, "Fourier series needs Q >= 1, n >= 1, N >= 0");
}

FourierSeries::FourierSeries(int q, Mat alpha, Mat beta) : q_(q), alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (q < 1 || alpha_.rows() < 1 || alpha_.cols() < 1)
    fail(ErrorCode::InvalidArgument, "Fourier series needs Q >= 1 and at least alpha_0");
  if (beta_.rows() != alpha_.rows() || beta_.cols() != alpha_.cols())
    fail(ErrorCode::InvalidArgument, "alpha and beta shapes differ");
  if (!alpha_.allFinite() || !beta_.allFinite()) fail(ErrorCode::NonFinite, "non-finite Fourier coefficient");
  beta_.col(0).setZero();
}

void FourierSeries::set_alpha(int i, const Vec& a) {
  if (i < 0 || i > N() || a.size() != n()) fail(ErrorCode::InvalidArgument, "alpha index or size out of range");
  alpha_.col(i) = a;
}

void FourierSeries::set_beta(int i, const Vec& b) {
  if (i < 1 || i > N() || b.size() != n()) fail(ErrorCode::InvalidArgument, "beta index or size out of range");
  beta_.col(i) = b;
}

void FourierSeries::eval(double theta, Vec& f, Vec& df) const {
  const double phi = theta / q_;
  const double c1 = std::cos(phi);
  const double s1 = std::sin(phi);
  f = alpha_.col(0);
  df = Vec::Zero(n());
  double c = 1.0;
  double s = 0.0;
  for (int i = 1; i <= N(); ++i) {
    const double cn = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = cn;
    if (i % 32 == 0) {
      c = std::cos(i * phi);
      s = std::sin(i * phi);
    }
    f += c * alpha_.col(i) + s * beta_.col(i);
    df += (static_cast<double>(i) / q_) * (c * beta_.col(i) - s * alpha_.col(i));
  }
}

Vec FourierSeries::value(double theta) const {
  Vec f, df;
  eval(theta, f, df);
  return f;
}

Vec FourierSeries::derivative(double theta) const {
  Vec f, df;
  eval(theta, f, df);
  return df;
}

int FourierSeries::max_active(double rel_tol) const {
  const double scale = std::max(alpha_.cwiseAbs().maxCoeff(), beta_.cwiseAbs().maxCoeff());
  if (scale == 0.0) return 0;
  for (int i = N(); i >= 1; --i)
    if (std::max(alpha_.col(i).cwiseAbs().maxCoeff(), beta_.col(i).cwiseAbs().maxCoeff()) > rel_tol * scale)
      return i;
  return 0;
}

FourierSeries FourierSeries::resized(int n_max) const {
  FourierSeries out(q_, n(), n_max);
  const int keep = std::min(n_max, N()) + 1;
  out.alpha_.leftCols(keep) = alpha_.leftCols(keep);
  out.beta_.leftCols(keep) = beta_.leftCols(keep);
  return out;
}

double FourierSeries::lipschitz(int m) const {
  const Mat s = synthesize(*this, m);
  const double h = kTwoPi * q_ / m;
  double lip = 0.0;
  for (int k = 0; k < m; ++k) lip = std::max(lip, (s.col((k + 1) % m) - s.col(k)).norm() / h);
  return lip;
}

FourierSeries analyze(const Mat& samples, int q, int n_max, double* tail_fraction) {
  const int m = static_cast<int>(samples.cols());
  const int n = static_cast<int>(samples.rows());
  if (m < 2 * n_max + 2)
    fail(ErrorCode::Undersampled,
         std::to_string(m) + " samples cannot resolve index " + std::to_string(n_max) + " (need 2N+2)");
  if (!samples.allFinite()) fail(ErrorCode::NonFinite, "non-finite profile sample");
  Mat alpha = Mat::Zero(n, n_max + 1);
  Mat beta = Mat::Zero(n, n_max + 1);
  Eigen::FFT<double> fft;
  std::vector<double> row(m);
  std::vector<std::complex<double>> spec;
  double total = 0.0;
  double tail = 0.0;
  for (int d = 0; d < n; ++d) {
    for (int k = 0; k < m; ++k) row[k] = samples(d, k);
    fft.fwd(spec, row);
    const double inv = 1.0 / m;
    alpha(d, 0) = spec[0].real() * inv;
    for (int i = 1; i <= n_max; ++i) {
      alpha(d, i) = 2.0 * spec[i].real() * inv;
      beta(d, i) = -2.0 * spec[i].imag() * inv;
    }
    for (int i = 0; i <= m / 2; ++i) {
      const double weight = (i == 0 || 2 * i == m) ? 1.0 : 2.0;
      const double e = weight * std::norm(spec[i] * inv);
      total += e;
      if (i > n_max) tail += e;
    }
  }
  if (tail_fraction) *tail_fraction = total > 0 ? tail / total : 0.0;
  return FourierSeries(q, alpha, beta);
}

Mat synthesize(const FourierSeries& f, int m) {
  if (m < 1) fail(ErrorCode::InvalidArgument, "synthesize needs at least one node");
  Mat out(f.n(), m);
  const double h = kTwoPi * f.Q() / m;
  for (int k = 0; k < m; ++k) out.col(k) = f.value(k * h);
  return out;
}

FourierSeries project_modeQ(const FourierSeries& f) {
  if (f.N() < f.Q()) fail(ErrorCode::InvalidArgument, "project_modeQ needs N >= Q");
  FourierSeries out(f.Q(), f.n(), f.N());
  out.set_alpha(f.Q(), f.alpha().col(f.Q()));
  out.set_beta(f.Q(), f.beta().col(f.Q()));
  return out;
}

FourierSeries remainder_modeQ(const FourierSeries& f) {
  if (f.N() < f.Q()) fail(ErrorCode::InvalidArgument, "remainder_modeQ needs N >= Q");
  FourierSeries out = f;
  out.set_alpha(f.Q(), Vec::Zero(f.n()));
  out.set_beta(f.Q(), Vec::Zero(f.n()));
  return out;
}

SobolevNorms sobolev_norm(const FourierSeries& f) {
  double l2 = f.alpha().col(0).squaredNorm();
  double d2 = 0.0;
  for (int i = 1; i <= f.N(); ++i) {
    const double c2 = f.alpha().col(i).squaredNorm() + f.beta().col(i).squaredNorm();
    const double k = static_cast<double>(i) / f.Q();
    l2 += 0.5 * c2;
    d2 += 0.5 * k * k * c2;
  }
  const double period = kTwoPi * f.Q();
  return {std::sqrt(period * l2), std::sqrt(period * (l2 + d2))};
}

int theta_panels(int q, int max_active) { return 2 * std::max({q, max_active, 1}); }

namespace {

class HarmonicChart final : public Chart {
 public:
  HarmonicChart(FourierSeries f, double r_out, Mat frame)
      : f_(std::move(f)), r_out_(r_out), frame_(std::move(frame)), k_(f_.max_active()) {}

  int dim() const override { return f_.n() + 2; }

  ChartJet eval(double w, double theta) const override {
    std::vector<ChartJet> out;
    eval_line(theta, {w}, out);
    return out[0];
  }

  void eval_line(double theta, const std::vector<double>& ws, std::vector<ChartJet>& out) const override {
    const int n = f_.n();
    const int q = f_.Q();
    // per-mode values A_i and theta-derivatives B_i along this line
    Mat a(n, k_ + 1);
    Mat b(n, k_ + 1);
    a.col(0) = f_.alpha().col(0);
    b.col(0).setZero();
    for (int i = 1; i <= k_; ++i) {
      const double phi = i * theta / q;
      const double c = std::cos(phi);
      const double s = std::sin(phi);
      a.col(i) = c * f_.alpha().col(i) + s * f_.beta().col(i);
      b.col(i) = (static_cast<double>(i) / q) * (c * f_.beta().col(i) - s * f_.alpha().col(i));
    }
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    out.resize(ws.size());
    for (std::size_t j = 0; j < ws.size(); ++j) {
      const double w = ws[j];
      Vec g = a.col(k_);
      Vec gt = b.col(k_);
      Vec gw = k_ * a.col(k_);
      for (int i = k_ - 1; i >= 0; --i) {
        g = g * w + a.col(i);
        gt = gt * w + b.col(i);
        if (i >= 1) gw = gw * w + i * a.col(i);
      }
      const double wq1 = std::pow(w, q - 1);
      const double r = r_out_ * wq1 * w;
      const double dr = r_out_ * q * wq1;
      ChartJet jet{Vec(n + 2), Vec(n + 2), Vec(n + 2)};
      jet.x << r * ct, r * st, r_out_ * g;
      jet.xu << dr * ct, dr * st, r_out_ * gw;
      jet.xv << -r * st, r * ct, r_out_ * gt;
      if (frame_.size() > 0) {
        jet.x = frame_ * jet.x;
        jet.xu = frame_ * jet.xu;
        jet.xv = frame_ * jet.xv;
      }
      out[j] = std::move(jet);
    }
  }

 private:
  FourierSeries f_;
  double r_out_;
  Mat frame_;
  int k_;
};

}  // namespace

ParamSurface harmonic_extension(const FourierSeries& f, double r_out, const Mat& frame, int orientation,
                                double max_lip, int order) {
  if (!(r_out > 0.0)) fail(ErrorCode::InvalidArgument, "harmonic_extension needs r_out > 0");
  if (frame.size() > 0 && (frame.rows() != f.n() + 2 || frame.cols() != f.n() + 2))
    fail(ErrorCode::InvalidArgument, "frame must be (2+n) x (2+n)");
  const int k = f.max_active();
  const double lip = f.lipschitz(std::max(256, 32 * std::max(k, 1)));
  if (lip > max_lip)
    fail(ErrorCode::LipschitzTooLarge, "boundary profile Lip " + std::to_string(lip) + " exceeds " +
                                           std::to_string(max_lip));
  QuadratureSpec quad;
  quad.order = order;
  quad.u_panels = 1 + k / 24;
  quad.v_panels = theta_panels(f.Q(), k);
  // modes below Q make the sheet steep near the branch point; grade toward w = 0
  bool sub_q = false;
  for (int i = 1; i < f.Q() && i <= k; ++i)
    sub_q = sub_q || f.alpha().col(i).cwiseAbs().maxCoeff() > 0.0 || f.beta().col(i).cwiseAbs().maxCoeff() > 0.0;
  if (sub_q)
    for (double b = std::pow(0.25, 8); b < 0.99; b *= 4.0) quad.u_breaks.push_back(b);
  auto chart = std::make_shared<HarmonicChart>(f.resized(std::max(k, 0)), r_out, frame);
  return ParamSurface(chart, Rect{0.0, 1.0, 0.0, kTwoPi * f.Q()}, 1, orientation, quad);
}

}  // namespace tclab
