#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <vector>

namespace rigcal {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Unit quaternion in (w, x, y, z) order, Hamilton convention.
///
/// Every instance is normalized and sits on the canonical hemisphere: w > 0,
/// or w == 0 and the first nonzero of (x, y, z) is positive. q and -q describe
/// the same rotation, so the canonical form makes outputs deterministic.
class UnitQuaternion {
 public:
  UnitQuaternion() = default;

  /// Normalizes and canonicalizes. Throws NotUnitQuaternion on a zero or
  /// non-finite input.
  UnitQuaternion(double w, double x, double y, double z);
  explicit UnitQuaternion(const Vec4& wxyz);

  static UnitQuaternion identity() { return {}; }
  /// Rotation of `angle` radians about `axis` (need not be unit length).
  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);
  /// Exponential map of a rotation vector (axis * angle, radians).
  static UnitQuaternion from_rotation_vector(const Vec3& rotvec);

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  Vec4 coeffs() const { return {w_, x_, y_, z_}; }

  /// Rotation angle in [0, pi] radians.
  double angle() const;
  /// Unit rotation axis; (1, 0, 0) when the angle is zero.
  Vec3 axis() const;
  Vec3 rotate(const Vec3& p) const;

 private:
  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

UnitQuaternion quat_multiply(const UnitQuaternion& a, const UnitQuaternion& b);
UnitQuaternion quat_conjugate(const UnitQuaternion& q);
Mat3 quat_to_matrix(const UnitQuaternion& q);

/// Converts a rotation matrix, projecting near-rotations (orthogonality
/// residual <= 1e-3) onto SO(3) first. Throws NotARotation on reflections or
/// larger residuals.
UnitQuaternion matrix_to_quat(const Mat3& r);

/// Nearest rotation in the Frobenius sense (polar decomposition via SVD).
Mat3 project_to_rotation(const Mat3& m);

/// Angle of the relative rotation between a and b, in degrees, within [0, 180].
double geodesic_angle(const UnitQuaternion& a, const UnitQuaternion& b);

inline UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
  return quat_multiply(a, b);
}

/// Rigid motion p -> R p + T.
struct RigidMotion {
  UnitQuaternion rotation;
  Vec3 translation = Vec3::Zero();

  static RigidMotion identity() { return {}; }
  Vec3 apply(const Vec3& p) const { return rotation.rotate(p) + translation; }
};

/// compose(a, b) applies b first, then a.
RigidMotion compose(const RigidMotion& a, const RigidMotion& b);
RigidMotion invert(const RigidMotion& m);

/// Rotation, translation and uniform scale relating the two camera frames.
///
/// A calibration target has scale > 0 (see `is_valid`); running estimates may
/// carry any scale, including the 0 sentinel for "not yet estimated".
struct SimilarityTransform {
  UnitQuaternion rotation;
  Vec3 translation = Vec3::Zero();
  double scale = 1.0;

  static SimilarityTransform identity() { return {}; }
  bool is_valid() const;
};

/// Ordered poses, frame 0 first. Rebased trajectories have poses[0] equal to
/// the identity. Timestamps are optional metadata carried through from files.
struct Trajectory {
  std::vector<RigidMotion> poses;
  std::vector<double> timestamps;

  std::size_t size() const { return poses.size(); }
  /// Number of frames after frame 0.
  std::size_t frame_count() const { return poses.empty() ? 0 : poses.size() - 1; }
};

}  // namespace rigcal
