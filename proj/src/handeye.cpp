#include "rigcal/handeye.hpp"

#include "rigcal/error.hpp"

namespace rigcal {

ConstraintMatrixA build_A(const UnitQuaternion& q0, const UnitQuaternion& q1) {
  const double w0 = q0.w(), x0 = q0.x(), y0 = q0.y(), z0 = q0.z();
  const double w1 = q1.w(), x1 = q1.x(), y1 = q1.y(), z1 = q1.z();
  ConstraintMatrixA a;
  a << w0 - w1, -x0 + x1, -y0 + y1, -z0 + z1,
       x0 - x1, w0 - w1, -z0 - z1, y0 + y1,
       y0 - y1, z0 + z1, w0 - w1, -x0 - x1,
       z0 - z1, -y0 - y1, x0 + x1, w0 - w1;
  return a;
}

ConstraintMatrixB build_B(const Mat3& r0, const Mat3& delta_r, const Vec3& t1) {
  ConstraintMatrixB b;
  b.leftCols<3>() = Mat3::Identity() - r0;
  b.col(3) = delta_r * t1;
  return b;
}

double rotation_residual(const ConstraintMatrixA& a, const UnitQuaternion& dq) {
  return (a * dq.coeffs()).norm();
}

Trajectory accumulate_relative(std::span<const RigidMotion> motions) {
  if (motions.empty()) throw Error(ErrorKind::NoData, "no motions to accumulate");
  Trajectory out;
  out.poses.reserve(motions.size() + 1);
  out.poses.push_back(RigidMotion::identity());
  for (const RigidMotion& m : motions) out.poses.push_back(compose(out.poses.back(), m));
  return out;
}

std::vector<RigidMotion> relative_motions(const Trajectory& trajectory) {
  std::vector<RigidMotion> out;
  if (trajectory.poses.size() < 2) return out;
  out.reserve(trajectory.poses.size() - 1);
  for (std::size_t t = 1; t < trajectory.poses.size(); ++t) {
    out.push_back(compose(invert(trajectory.poses[t - 1]), trajectory.poses[t]));
  }
  return out;
}

}  // namespace rigcal
