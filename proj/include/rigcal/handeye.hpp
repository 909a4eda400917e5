#pragma once

#include "rigcal/geometry.hpp"

#include <span>
#include <vector>

namespace rigcal {

/// 4x4 rotation constraint: A * dq = 0 for the rig rotation dq.
using ConstraintMatrixA = Mat4;
/// 3x4 translation constraint [I - R0 | dR * T1]: B * (dT, dlambda) = T0.
using ConstraintMatrixB = Eigen::Matrix<double, 3, 4>;

/// Rotation constraint from the two cameras' orientations at the same frame.
/// Equals L(q0) - R(q1), so A * p = q0 (x) p - p (x) q1 for any quaternion p.
ConstraintMatrixA build_A(const UnitQuaternion& q0, const UnitQuaternion& q1);

ConstraintMatrixB build_B(const Mat3& r0, const Mat3& delta_r, const Vec3& t1);

/// ||A * dq|| with dq taken as a raw 4-vector.
double rotation_residual(const ConstraintMatrixA& a, const UnitQuaternion& dq);

/// Chains frame-to-frame motions into poses relative to frame 0:
/// poses[0] = identity, poses[t] = poses[t-1] o motions[t-1].
Trajectory accumulate_relative(std::span<const RigidMotion> motions);

/// Inverse of accumulate_relative: motions[t-1] = poses[t-1]^-1 o poses[t].
std::vector<RigidMotion> relative_motions(const Trajectory& trajectory);

}  // namespace rigcal
