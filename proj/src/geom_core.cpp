#include "tclab/geom_core.hpp"

#include "tclab/errors.hpp"
#include "tclab/random.hpp"

#include <algorithm>
#include <cmath>

namespace tclab {

void check_ambient(const Vec& v) {
  if (v.size() < 3) fail(ErrorCode::InvalidArgument, "ambient dimension must be at least 3");
  if (!v.allFinite()) fail(ErrorCode::NonFinite, "ambient vector has non-finite entries");
}

Plane2::Plane2(const Vec& a, const Vec& b) {
  check_ambient(a);
  if (b.size() != a.size()) fail(ErrorCode::InvalidArgument, "plane frame vectors differ in dimension");
  const double na = a.norm();
  if (!(na > 0.0)) fail(ErrorCode::InvalidArgument, "degenerate plane frame");
  e1_ = a / na;
  Vec w = b - e1_.dot(b) * e1_;
  // second pass keeps |e1.e2| at roundoff level for nearly parallel input
  w -= e1_.dot(w) * e1_;
  const double nw = w.norm();
  if (!(nw > 1e-14 * std::max(1.0, b.norm()))) fail(ErrorCode::InvalidArgument, "degenerate plane frame");
  e2_ = w / nw;
}

Plane2 Plane2::coordinate(int dim, int i, int j) {
  return Plane2(Vec::Unit(dim, i), Vec::Unit(dim, j));
}

Mat Plane2::projector() const { return e1_ * e1_.transpose() + e2_ * e2_.transpose(); }

Mat Plane2::bivector() const { return wedge(e1_, e2_); }

Plane2 Plane2::flipped() const { return Plane2(e2_, e1_); }

Plane2 Plane2::transformed(const Mat& rotation) const { return Plane2(rotation * e1_, rotation * e2_); }

Split split(const Vec& x, const Plane2& plane) {
  if (x.size() != plane.dim()) fail(ErrorCode::InvalidArgument, "split: dimension mismatch");
  Vec parallel = plane.e1().dot(x) * plane.e1() + plane.e2().dot(x) * plane.e2();
  Vec perp = x - parallel;
  return {std::move(parallel), std::move(perp)};
}

double plane_distance(const Plane2& a, const Plane2& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::InvalidArgument, "plane_distance: dimension mismatch");
  const Mat diff = a.projector() - b.projector();
  Eigen::SelfAdjointEigenSolver<Mat> eig(diff, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Mat wedge(const Vec& u, const Vec& v) { return u * v.transpose() - v * u.transpose(); }

double bivector_inner(const Mat& b, const Mat& c) { return 0.5 * b.cwiseProduct(c).sum(); }

double bivector_norm(const Mat& b) { return std::sqrt(0.5 * b.squaredNorm()); }

double bivector_mass_norm(const Mat& b) {
  Eigen::JacobiSVD<Mat> svd(b);
  return 0.5 * svd.singularValues().sum();
}

TwoCovector::TwoCovector(int dim) : a_(Mat::Zero(dim, dim)) {}

TwoCovector TwoCovector::from_upper(const Mat& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::InvalidArgument, "2-covector matrix must be square");
  TwoCovector out(static_cast<int>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j) out.set(i, j, m(i, j));
  return out;
}

TwoCovector TwoCovector::basis(int dim, int i, int j, double c) {
  TwoCovector out(dim);
  out.set(i, j, c);
  return out;
}

double TwoCovector::pair(const Mat& bivector) const { return 0.5 * a_.cwiseProduct(bivector).sum(); }

void TwoCovector::set(int i, int j, double value) {
  a_(i, j) = value;
  a_(j, i) = -value;
}

TwoCovector TwoCovector::operator+(const TwoCovector& o) const {
  TwoCovector out(dim());
  out.a_ = a_ + o.a_;
  return out;
}

TwoCovector TwoCovector::operator*(double c) const {
  TwoCovector out(dim());
  out.a_ = c * a_;
  return out;
}

double comass2(const TwoCovector& omega) {
  Eigen::JacobiSVD<Mat> svd(omega.matrix());
  return svd.singularValues()(0);
}

double comass2_ascent(const TwoCovector& omega, std::uint64_t seed, int starts, int iterations) {
  const Mat& a = omega.matrix();
  const int dim = omega.dim();
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  const double step = 0.5 / scale;
  Rng rng(seed);
  double best = 0.0;
  for (int s = 0; s < starts; ++s) {
    Vec v(dim), w(dim);
    for (int i = 0; i < dim; ++i) {
      v(i) = rng.normal();
      w(i) = rng.normal();
    }
    auto orthonormalize = [&] {
      v.normalize();
      w -= v.dot(w) * v;
      w.normalize();
    };
    orthonormalize();
    for (int it = 0; it < iterations; ++it) {
      const Vec gv = a * w;
      const Vec gw = a.transpose() * v;
      v += step * gv;
      w += step * gw;
      orthonormalize();
    }
    best = std::max(best, v.dot(a * w));
  }
  return best;
}

Mat complete_frame(const Plane2& plane, const Mat& hint) {
  const int dim = plane.dim();
  Mat frame(dim, dim);
  frame.col(0) = plane.e1();
  frame.col(1) = plane.e2();
  int filled = 2;
  auto try_add = [&](Vec c) {
    for (int k = 0; k < filled; ++k) c -= frame.col(k).dot(c) * frame.col(k);
    for (int k = 0; k < filled; ++k) c -= frame.col(k).dot(c) * frame.col(k);
    const double nc = c.norm();
    if (nc > 1e-6) frame.col(filled++) = c / nc;
  };
  for (int k = 0; k < hint.cols() && filled < dim; ++k) try_add(hint.col(k));
  for (int k = 0; k < dim && filled < dim; ++k) try_add(Vec::Unit(dim, k));
  return frame;
}

Mat random_rotation(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

}  // namespace tclab
