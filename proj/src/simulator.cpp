#include "rigcal/simulator.hpp"

#include "rigcal/error.hpp"
#include "rigcal/handeye.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace rigcal {

namespace {

Vec3 gaussian3(std::mt19937_64& rng, double stddev) {
  std::normal_distribution<double> n(0.0, stddev);
  const double a = n(rng);
  const double b = n(rng);
  const double c = n(rng);
  return {a, b, c};
}

RigidMotion perturb(const RigidMotion& m, std::mt19937_64& rng, const NoiseModel& noise) {
  RigidMotion out = m;
  if (noise.rot_std_deg > 0.0) {
    const Vec3 delta = gaussian3(rng, noise.rot_std_deg * std::numbers::pi / 180.0);
    out.rotation = quat_multiply(m.rotation, UnitQuaternion::from_rotation_vector(delta));
  }
  if (noise.trans_std > 0.0) out.translation += gaussian3(rng, noise.trans_std);
  return out;
}

}  // namespace

void SimConfig::validate() const {
  if (frames < 2) throw Error(ErrorKind::InvalidArgument, "simulation needs at least 2 frames");
  if (!(damping > 0.0 && damping <= 1.0)) throw Error(ErrorKind::InvalidArgument, "damping must lie in (0, 1]");
  if (!(process_noise_rot_deg >= 0.0) || !(process_noise_trans >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "process noise must be nonnegative");
  }
}

SimilarityTransform random_rig(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  SimilarityTransform rig;
  // Normalized 4D Gaussian is uniform on the 3-sphere.
  Vec4 q;
  do {
    for (int i = 0; i < 4; ++i) q[i] = n(rng);
  } while (q.norm() < 1e-6);
  rig.rotation = UnitQuaternion(q);
  Vec3 t;
  do {
    t = gaussian3(rng, 1.0);
  } while (t.norm() < 1e-6);
  rig.translation = t / t.norm();
  std::uniform_real_distribution<double> u(std::log(0.5), std::log(2.0));
  rig.scale = std::exp(u(rng));
  return rig;
}

Trajectory generate_master_trajectory(const SimConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const double rot_std = config.process_noise_rot_deg * std::numbers::pi / 180.0;

  Vec3 omega = config.initial_rotation_rate;
  Vec3 velocity = config.initial_translation_rate;
  Trajectory out;
  out.poses.reserve(config.frames + 1);
  out.poses.push_back(RigidMotion::identity());
  for (std::size_t t = 1; t <= config.frames; ++t) {
    omega = config.damping * omega;
    velocity = config.damping * velocity;
    if (rot_std > 0.0) omega += gaussian3(rng, rot_std);
    if (config.process_noise_trans > 0.0) velocity += gaussian3(rng, config.process_noise_trans);
    const RigidMotion step{UnitQuaternion::from_rotation_vector(omega), velocity};
    out.poses.push_back(compose(out.poses.back(), step));
  }
  return out;
}

Trajectory derive_slave_trajectory(const Trajectory& camera0, const SimilarityTransform& rig) {
  const UnitQuaternion dq_inv = quat_conjugate(rig.rotation);
  const Mat3 dr_t = quat_to_matrix(rig.rotation).transpose();
  Trajectory out;
  out.timestamps = camera0.timestamps;
  out.poses.reserve(camera0.size());
  for (const RigidMotion& p : camera0.poses) {
    const Mat3 r0 = quat_to_matrix(p.rotation);
    RigidMotion s;
    s.rotation = quat_multiply(quat_multiply(dq_inv, p.rotation), rig.rotation);
    s.translation = dr_t * (p.translation - (Mat3::Identity() - r0) * rig.translation) / rig.scale;
    out.poses.push_back(s);
  }
  return out;
}

Trajectory add_noise(const Trajectory& trajectory, const NoiseModel& noise) {
  if (!(noise.rot_std_deg >= 0.0) || !(noise.trans_std >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "noise standard deviations must be nonnegative");
  }
  if (trajectory.poses.empty() || (noise.rot_std_deg == 0.0 && noise.trans_std == 0.0)) return trajectory;
  std::mt19937_64 rng(noise.seed);

  if (noise.perturb_relative) {
    std::vector<RigidMotion> motions = relative_motions(trajectory);
    if (motions.empty()) return trajectory;
    for (RigidMotion& m : motions) m = perturb(m, rng, noise);
    Trajectory out = accumulate_relative(motions);
    // accumulate_relative starts from identity; keep the original frame 0.
    for (RigidMotion& p : out.poses) p = compose(trajectory.poses.front(), p);
    out.timestamps = trajectory.timestamps;
    return out;
  }

  Trajectory out = trajectory;
  for (std::size_t t = 1; t < out.poses.size(); ++t) out.poses[t] = perturb(out.poses[t], rng, noise);
  return out;
}

SimulatedRig simulate_rig(const SimConfig& config, std::uint64_t rig_seed, const NoiseModel& noise) {
  SimulatedRig out;
  out.rig = random_rig(rig_seed);
  const Trajectory clean0 = generate_master_trajectory(config);
  const Trajectory clean1 = derive_slave_trajectory(clean0, out.rig);
  out.camera0 = add_noise(clean0, noise);
  NoiseModel noise1 = noise;
  noise1.seed = noise.seed + 1;
  out.camera1 = add_noise(clean1, noise1);
  return out;
}

}  // namespace rigcal
