#include "rigcal/batch.hpp"
#include "rigcal/error.hpp"
#include "rigcal/incremental_svd.hpp"
#include "rigcal/report.hpp"
#include "rigcal/simulator.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace rigcal;
using rigcal::testing::random_observation;
using rigcal::testing::random_quaternion;
using rigcal::testing::random_trajectory;
using rigcal::testing::rel_diff;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::IoError;
}

SimulatedRig clean_rig(std::uint64_t seed) {
  SimConfig cfg;
  cfg.seed = seed;
  return simulate_rig(cfg, seed + 1000, {});
}

}  // namespace

TEST_CASE("solve_rotation_batch recovers a noise-free rig") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SimulatedRig sim = clean_rig(seed);
    std::vector<ConstraintMatrixA> as;
    for (std::size_t t = 1; t < sim.camera0.size(); ++t) {
      as.push_back(build_A(sim.camera0.poses[t].rotation, sim.camera1.poses[t].rotation));
    }
    const RotationSolution r = solve_rotation_batch(as);
    CHECK(geodesic_angle(r.rotation, sim.rig.rotation) < 1e-8);
    CHECK_FALSE(r.ill_conditioned);
    CHECK(std::is_sorted(r.eigenvalues.data(), r.eigenvalues.data() + 4));
  }
}

TEST_CASE("solve_rotation_batch on equal rotations") {
  std::mt19937_64 rng(51);
  SUBCASE("varied axes: identity is the unique solution") {
    std::vector<ConstraintMatrixA> as;
    for (int i = 0; i < 10; ++i) {
      const UnitQuaternion q = random_quaternion(rng);
      as.push_back(build_A(q, q));
    }
    const RotationSolution r = solve_rotation_batch(as);
    CHECK(geodesic_angle(r.rotation, UnitQuaternion::identity()) < 1e-8);
    CHECK_FALSE(r.ill_conditioned);
  }
  SUBCASE("one rotation axis: ill-conditioned but identity still minimizes") {
    std::vector<ConstraintMatrixA> as;
    for (int i = 1; i <= 10; ++i) {
      const UnitQuaternion q = UnitQuaternion::from_axis_angle(Vec3::UnitZ(), 0.1 * i);
      as.push_back(build_A(q, q));
    }
    const RotationSolution r = solve_rotation_batch(as);
    CHECK(r.ill_conditioned);
    double cost = 0.0;
    for (const Mat4& a : as) cost += std::pow(rotation_residual(a, r.rotation), 2);
    CHECK(cost < 1e-20);
  }
}

TEST_CASE("solve_rotation_batch on a single frame matches svd_init by cost") {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 50; ++i) {
    const Mat4 a = build_A(random_quaternion(rng), random_quaternion(rng));
    const std::vector<ConstraintMatrixA> one{a};
    const double batch = rotation_residual(a, solve_rotation_batch(one).rotation);
    const double online = rotation_residual(a, svd_solution(svd_init(a)));
    CHECK(std::abs(batch - online) < 1e-10);
  }
}

TEST_CASE("solve_rotation_batch rejects empty input") {
  CHECK(kind_of([] { solve_rotation_batch({}); }) == ErrorKind::NoData);
}

TEST_CASE("solve_translation_batch") {
  SUBCASE("noise-free stream recovers translation and scale") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const SimulatedRig sim = clean_rig(seed + 20);
      const Mat3 dr = quat_to_matrix(sim.rig.rotation);
      std::vector<RlsObservation> obs;
      for (std::size_t t = 1; t < sim.camera0.size(); ++t) {
        obs.push_back({build_B(quat_to_matrix(sim.camera0.poses[t].rotation), dr, sim.camera1.poses[t].translation),
                       sim.camera0.poses[t].translation});
      }
      const TranslationScale ts = solve_translation_batch(obs);
      CHECK((ts.translation - sim.rig.translation).norm() < 1e-10);
      CHECK(std::abs(ts.scale - sim.rig.scale) < 1e-10);
    }
  }

  SUBCASE("pure translation is rank deficient") {
    std::mt19937_64 rng(53);
    std::vector<RlsObservation> obs;
    for (int i = 0; i < 10; ++i) obs.push_back({build_B(Mat3::Identity(), Mat3::Identity(), rigcal::testing::random_vector(rng)), Vec3::Zero()});
    CHECK(kind_of([&] { solve_translation_batch(obs); }) == ErrorKind::RankDeficient);
  }

  SUBCASE("exponential profile matches the recursive solver") {
    std::mt19937_64 rng(54);
    for (const double lambda : {1.0, 0.95, 0.9}) {
      std::vector<RlsObservation> obs;
      for (int i = 0; i < 25; ++i) obs.push_back(random_observation(rng));
      RlsState s = rls_init(lambda, 1.0);
      for (const RlsObservation& o : obs) s = rls_update(s, o);
      const TranslationScale ts = solve_translation_batch(obs, ExponentialProfile{lambda, 1.0});
      Vec4 x;
      x << ts.translation, ts.scale;
      CHECK(rel_diff(x, s.x) < 1e-8);
    }
  }

  SUBCASE("profile keeps an empty problem well posed") {
    const TranslationScale ts = solve_translation_batch({}, ExponentialProfile{});
    CHECK(ts.translation.isZero(0.0));
    CHECK(ts.scale == 0.0);
  }
}

TEST_CASE("calibrate_batch") {
  SUBCASE("noise-free 128-frame simulation") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const SimulatedRig sim = clean_rig(seed + 40);
      const BatchCalibration cal = calibrate_batch(sim.camera0, sim.camera1);
      CHECK(geodesic_angle(cal.transform.rotation, sim.rig.rotation) < 1e-8);
      CHECK(direction_angle_deg(cal.transform.translation, sim.rig.translation) < 1e-6);
      CHECK(std::abs(cal.transform.scale - sim.rig.scale) / sim.rig.scale < 1e-10);
    }
  }

  SUBCASE("identical trajectories give the identity rig") {
    std::mt19937_64 rng(55);
    const Trajectory t = random_trajectory(rng, 30);
    const BatchCalibration cal = calibrate_batch(t, t);
    CHECK(geodesic_angle(cal.transform.rotation, UnitQuaternion::identity()) < 1e-8);
    CHECK(cal.transform.translation.norm() < 1e-10);
    CHECK(cal.transform.scale == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("a single pose carries no motion") {
    Trajectory t;
    t.poses.push_back(RigidMotion::identity());
    CHECK(kind_of([&] { calibrate_batch(t, t); }) == ErrorKind::RankDeficient);
  }

  SUBCASE("length mismatch") {
    std::mt19937_64 rng(56);
    CHECK(kind_of([&] { calibrate_batch(random_trajectory(rng, 5), random_trajectory(rng, 6)); }) ==
          ErrorKind::LengthMismatch);
  }
}

TEST_CASE("median batch error decreases with noise level") {
  const std::vector<std::pair<double, double>> levels{{2.0, 0.02}, {1.0, 0.01}, {0.5, 0.005}, {0.1, 0.001}};
  std::vector<double> medians;
  for (const auto& [rot, trans] : levels) {
    std::vector<double> errors;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
      SimConfig cfg;
      cfg.seed = 7000 + trial;
      const SimulatedRig sim = simulate_rig(cfg, 8000 + trial, {rot, trans, 9000 + trial, false});
      errors.push_back(geodesic_angle(calibrate_batch(sim.camera0, sim.camera1).transform.rotation, sim.rig.rotation));
    }
    std::nth_element(errors.begin(), errors.begin() + 25, errors.end());
    medians.push_back(errors[25]);
  }
  for (std::size_t i = 1; i < medians.size(); ++i) CHECK(medians[i] < medians[i - 1]);
}
