#pragma once

#include "rigcal/geometry.hpp"

#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace rigcal {

enum class PoseFormat { Kitti, Tum };

/// "kitti" or "tum"; throws InvalidArgument otherwise.
PoseFormat parse_pose_format(std::string_view name);

/// KITTI odometry layout: one pose per nonempty line, 12 numbers forming the
/// row-major 3x4 matrix [R | T]. Rotations with orthogonality residual up to
/// 1e-3 are projected onto SO(3). The result is rebased to frame 0.
///
/// Throws ParseError (line, token), NotARotation (line) or EmptyTrajectory.
Trajectory read_kitti_poses(std::istream& in);
Trajectory read_kitti_poses(const std::filesystem::path& path);

/// Writes with 17 significant digits so reading back is exact to round-off.
void write_kitti_poses(std::ostream& out, const Trajectory& trajectory);
void write_kitti_poses(const std::filesystem::path& path, const Trajectory& trajectory);

/// TUM layout: "timestamp tx ty tz qx qy qz qw" per line, '#' lines are
/// comments. Note the scalar-last quaternion on disk. Quaternions whose norm is
/// off by more than 1e-3 are rejected (NotUnitQuaternion, with line number).
/// Timestamps are kept but never used for association.
Trajectory read_tum_trajectory(std::istream& in);
Trajectory read_tum_trajectory(const std::filesystem::path& path);

/// Frame index is written as the timestamp when the trajectory has none.
void write_tum_trajectory(std::ostream& out, const Trajectory& trajectory);
void write_tum_trajectory(const std::filesystem::path& path, const Trajectory& trajectory);

Trajectory read_trajectory(const std::filesystem::path& path, PoseFormat format);
void write_trajectory(const std::filesystem::path& path, const Trajectory& trajectory, PoseFormat format);

/// JSON sidecar: {"rotation": {"w","x","y","z"}, "translation": [x,y,z], "scale": s}.
void write_rig_ground_truth(const std::filesystem::path& path, const SimilarityTransform& rig);
/// Throws ParseError naming the missing or invalid field.
SimilarityTransform read_rig_ground_truth(const std::filesystem::path& path);

/// poses[t] <- poses[0]^-1 o poses[t]. Throws EmptyTrajectory on no poses.
Trajectory rebase_to_first(const Trajectory& trajectory);

}  // namespace rigcal
