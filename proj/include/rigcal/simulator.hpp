#pragma once

#include "rigcal/geometry.hpp"

#include <cstddef>
#include <cstdint>

namespace rigcal {

/// Damped random walk on the per-frame twist of the master camera:
///   v_t = damping * v_{t-1} + w_t,   w_t ~ N(0, diag(rot^2, trans^2))
/// and pose_t = pose_{t-1} o exp(v_t).
struct SimConfig {
  std::size_t frames = 128;
  double damping = 0.9;
  double process_noise_rot_deg = 3.0;
  double process_noise_trans = 0.05;
  /// Twist v_0 before the first frame: rotation vector (radians per frame) and
  /// translation (scene units per frame).
  Vec3 initial_rotation_rate = Vec3::Zero();
  Vec3 initial_translation_rate = Vec3::Zero();
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on frames < 2, damping outside (0, 1], or
  /// negative noise.
  void validate() const;
};

struct NoiseModel {
  double rot_std_deg = 0.0;
  double trans_std = 0.0;
  std::uint64_t seed = 0;
  /// Perturb frame-to-frame motions (then re-accumulate) instead of the
  /// poses relative to frame 0.
  bool perturb_relative = false;
};

/// Uniform rotation, unit-length translation, scale log-uniform in [0.5, 2].
SimilarityTransform random_rig(std::uint64_t seed);

Trajectory generate_master_trajectory(const SimConfig& config);

/// Slave poses that satisfy both constraint equations exactly:
///   q1 = dq^-1 (x) q0 (x) dq
///   T1 = dR^T (T0 - (I - R0) dT) / dlambda
Trajectory derive_slave_trajectory(const Trajectory& camera0, const SimilarityTransform& rig);

/// Per frame t >= 1: rotation right-multiplied by exp(delta), delta ~
/// N(0, (rot_std_deg * pi / 180)^2 I3); translation plus N(0, trans_std^2 I3).
Trajectory add_noise(const Trajectory& trajectory, const NoiseModel& noise);

struct SimulatedRig {
  SimilarityTransform rig;
  Trajectory camera0;
  Trajectory camera1;
};

/// Random rig from `rig_seed`, master trajectory from `config`, exact slave,
/// then independent noise on both cameras (camera 1 uses noise.seed + 1).
SimulatedRig simulate_rig(const SimConfig& config, std::uint64_t rig_seed, const NoiseModel& noise);

}  // namespace rigcal
