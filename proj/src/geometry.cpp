#include "rigcal/geometry.hpp"

#include "rigcal/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rigcal {

namespace {

constexpr double kRotationTolerance = 1e-3;

}  // namespace

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || n == 0.0) {
    throw Error(ErrorKind::NotUnitQuaternion, "cannot normalize a zero or non-finite quaternion");
  }
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  bool flip = w < 0.0;
  if (w == 0.0) {
    const double first = x != 0.0 ? x : (y != 0.0 ? y : z);
    flip = first < 0.0;
  }
  const double s = flip ? -1.0 : 1.0;
  // +0.0 keeps -0.0 out of the canonical form.
  w_ = s * w + 0.0;
  x_ = s * x + 0.0;
  y_ = s * y + 0.0;
  z_ = s * z + 0.0;
}

UnitQuaternion::UnitQuaternion(const Vec4& wxyz) : UnitQuaternion(wxyz[0], wxyz[1], wxyz[2], wxyz[3]) {}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0 || angle == 0.0) return identity();
  const Vec3 u = axis / n;
  const double s = std::sin(0.5 * angle);
  return {std::cos(0.5 * angle), s * u.x(), s * u.y(), s * u.z()};
}

UnitQuaternion UnitQuaternion::from_rotation_vector(const Vec3& rotvec) {
  return from_axis_angle(rotvec, rotvec.norm());
}

double UnitQuaternion::angle() const {
  const double v = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
  return 2.0 * std::atan2(v, w_);
}

Vec3 UnitQuaternion::axis() const {
  const Vec3 v(x_, y_, z_);
  const double n = v.norm();
  if (n == 0.0) return Vec3::UnitX();
  return v / n;
}

Vec3 UnitQuaternion::rotate(const Vec3& p) const {
  // p' = p + 2 u x (u x p + w p), u = vector part
  const Vec3 u(x_, y_, z_);
  const Vec3 t = 2.0 * u.cross(p);
  return p + w_ * t + u.cross(t);
}

UnitQuaternion quat_multiply(const UnitQuaternion& a, const UnitQuaternion& b) {
  return {a.w() * b.w() - a.x() * b.x() - a.y() * b.y() - a.z() * b.z(),
          a.w() * b.x() + a.x() * b.w() + a.y() * b.z() - a.z() * b.y(),
          a.w() * b.y() - a.x() * b.z() + a.y() * b.w() + a.z() * b.x(),
          a.w() * b.z() + a.x() * b.y() - a.y() * b.x() + a.z() * b.w()};
}

UnitQuaternion quat_conjugate(const UnitQuaternion& q) { return {q.w(), -q.x(), -q.y(), -q.z()}; }

Mat3 quat_to_matrix(const UnitQuaternion& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

Mat3 project_to_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

UnitQuaternion matrix_to_quat(const Mat3& input) {
  if (!input.allFinite()) throw Error(ErrorKind::NotARotation, "matrix has non-finite entries");
  if (input.determinant() < 0.0) throw Error(ErrorKind::NotARotation, "determinant is negative");
  const double residual = (input.transpose() * input - Mat3::Identity()).norm();
  if (residual > kRotationTolerance) {
    throw Error(ErrorKind::NotARotation, "orthogonality residual " + std::to_string(residual) + " exceeds 1e-3");
  }
  const Mat3 r = residual > 0.0 ? project_to_rotation(input) : input;

  // Shepperd: pivot on the largest of (trace, diagonal) for stability.
  const double trace = r.trace();
  const double d0 = r(0, 0), d1 = r(1, 1), d2 = r(2, 2);
  if (trace >= d0 && trace >= d1 && trace >= d2) {
    const double s = 2.0 * std::sqrt(1.0 + trace);
    return {0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s};
  }
  if (d0 >= d1 && d0 >= d2) {
    const double s = 2.0 * std::sqrt(1.0 + d0 - d1 - d2);
    return {(r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s};
  }
  if (d1 >= d2) {
    const double s = 2.0 * std::sqrt(1.0 + d1 - d0 - d2);
    return {(r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s, (r(1, 2) + r(2, 1)) / s};
  }
  const double s = 2.0 * std::sqrt(1.0 + d2 - d0 - d1);
  return {(r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, 0.25 * s};
}

double geodesic_angle(const UnitQuaternion& a, const UnitQuaternion& b) {
  // atan2 form of 2 acos(|<a,b>|); accurate near 0 where acos is not.
  const UnitQuaternion rel = quat_multiply(quat_conjugate(a), b);
  return rel.angle() * 180.0 / std::numbers::pi;
}

RigidMotion compose(const RigidMotion& a, const RigidMotion& b) {
  return {quat_multiply(a.rotation, b.rotation), a.rotation.rotate(b.translation) + a.translation};
}

RigidMotion invert(const RigidMotion& m) {
  const UnitQuaternion inv = quat_conjugate(m.rotation);
  return {inv, -inv.rotate(m.translation)};
}

bool SimilarityTransform::is_valid() const {
  return translation.allFinite() && std::isfinite(scale) && scale > 0.0;
}

}  // namespace rigcal
