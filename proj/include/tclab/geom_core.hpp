#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace tclab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Throws InvalidArgument unless v has dimension >= 3 and finite entries.
void check_ambient(const Vec& v);

/// Oriented 2-plane through the origin of R^{2+n}, stored as an orthonormal frame.
///
/// The constructor orthonormalizes (a, b) by Gram-Schmidt and keeps the
/// orientation of a ^ b.
class Plane2 {
 public:
  Plane2(const Vec& a, const Vec& b);

  /// span(e_i, e_j) of the coordinate basis of R^dim.
  static Plane2 coordinate(int dim, int i = 0, int j = 1);

  const Vec& e1() const { return e1_; }
  const Vec& e2() const { return e2_; }
  int dim() const { return static_cast<int>(e1_.size()); }

  Mat projector() const;
  /// Unit simple 2-vector e1 ^ e2 as an antisymmetric matrix.
  Mat bivector() const;
  Plane2 flipped() const;
  Plane2 transformed(const Mat& rotation) const;

 private:
  Vec e1_;
  Vec e2_;
};

struct Split {
  Vec parallel;
  Vec perp;
};

Split split(const Vec& x, const Plane2& plane);

/// Spectral norm of the difference of the orthogonal projectors (unoriented).
double plane_distance(const Plane2& a, const Plane2& b);

// 2-vectors are stored as antisymmetric matrices B with B(i,j) = xi^{ij}.
// The Euclidean inner product on Lambda^2 is <B, C> = 1/2 sum_ij B_ij C_ij,
// so that <u^v, a^b> = det[[u.a, u.b], [v.a, v.b]].

Mat wedge(const Vec& u, const Vec& v);
double bivector_inner(const Mat& b, const Mat& c);
double bivector_norm(const Mat& b);
/// Mass norm: half the sum of the singular values of the antisymmetric matrix.
double bivector_mass_norm(const Mat& b);

/// Constant 2-covector, A(i,j) = omega(d_i, d_j), antisymmetric.
class TwoCovector {
 public:
  explicit TwoCovector(int dim);
  /// Keeps the strict upper triangle of m and mirrors it.
  static TwoCovector from_upper(const Mat& m);
  /// dx^i ^ dx^j scaled by c.
  static TwoCovector basis(int dim, int i, int j, double c = 1.0);

  int dim() const { return static_cast<int>(a_.rows()); }
  const Mat& matrix() const { return a_; }
  double operator()(const Vec& v, const Vec& w) const { return v.dot(a_ * w); }
  /// Pairing with a 2-vector given as antisymmetric matrix.
  double pair(const Mat& bivector) const;

  void set(int i, int j, double value);
  double get(int i, int j) const { return a_(i, j); }

  TwoCovector operator+(const TwoCovector& o) const;
  TwoCovector operator*(double c) const;

 private:
  Mat a_;
};

/// max omega(v, w) over orthonormal pairs = largest singular value of A.
double comass2(const TwoCovector& omega);

/// Independent estimate of the comass by projected gradient ascent over
/// orthonormal pairs from several random starts.
double comass2_ascent(const TwoCovector& omega, std::uint64_t seed, int starts = 16, int iterations = 400);

/// Completes (e1, e2) of the plane to an orthonormal basis of R^dim. The
/// normal columns are obtained by projecting the columns of `hint` (if
/// non-empty, dim x (dim-2)) and then the coordinate axes, so that the frame
/// varies continuously with the plane.
Mat complete_frame(const Plane2& plane, const Mat& hint = Mat());

/// Rotation-invariant random orthogonal matrix (QR of a Gaussian matrix).
Mat random_rotation(int dim, std::uint64_t seed);

}  // namespace tclab
