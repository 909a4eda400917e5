#include "rigcal/batch.hpp"
#include "rigcal/error.hpp"
#include "rigcal/handeye.hpp"
#include "rigcal/incremental_svd.hpp"
#include "rigcal/simulator.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <limits>

using namespace rigcal;
using rigcal::testing::line_angle_deg;
using rigcal::testing::random_quaternion;
using rigcal::testing::stacked_svd;

namespace {

Mat4 random_block(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat4 m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = n(rng);
  }
  return m;
}

Eigen::MatrixXd random_dense(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = n(rng);
  }
  return m;
}

SvdState absorb(const std::vector<Mat4>& blocks) {
  SvdState s = svd_init(blocks.front());
  for (std::size_t i = 1; i < blocks.size(); ++i) s = svd_update_square(s, blocks[i]);
  return s;
}

Eigen::MatrixXd vstack(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd m(a.rows() + b.rows(), a.cols());
  m << a, b;
  return m;
}

}  // namespace

TEST_CASE("svd_init") {
  SUBCASE("identity") {
    const SvdState s = svd_init(Mat4::Identity());
    CHECK((s.raw_singular_values() - Vec4::Ones()).norm() < 1e-15);
    CHECK(orthogonality_error(s.v) < 1e-15);
    CHECK(s.frames_absorbed == 1);
  }
  SUBCASE("zero block is the degenerate start") {
    const SvdState s = svd_init(Mat4::Zero());
    CHECK(s.raw_singular_values().isZero(0.0));
    CHECK(s.v == Mat4::Identity());
    CHECK(svd_conditioning(s) == 1.0);
  }
  SUBCASE("diagonal") {
    const SvdState s = svd_init(Vec4(4, 3, 2, 1).asDiagonal().toDenseMatrix());
    CHECK((s.raw_singular_values() - Vec4(4, 3, 2, 1)).norm() < 1e-14);
    CHECK((s.v.cwiseAbs() - Mat4::Identity()).norm() < 1e-14);
    CHECK(svd_conditioning(s) == doctest::Approx(2.0));
  }
}

TEST_CASE("svd_update_square with a zero block changes nothing") {
  std::mt19937_64 rng(21);
  const SvdState s = svd_init(random_block(rng));
  const SvdState u = svd_update_square(s, Mat4::Zero());
  CHECK((u.raw_singular_values() - s.raw_singular_values()).norm() < 1e-13);
  for (int c = 0; c < 4; ++c) CHECK(line_angle_deg(u.v.col(c), s.v.col(c)) < 1e-8);
  CHECK(u.frames_absorbed == 2);
}

TEST_CASE("svd_update_square matches a batch SVD of the stack") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Mat4> blocks;
    for (int i = 0; i < 32; ++i) blocks.push_back(random_block(rng));
    const SvdState s = absorb(blocks);
    const auto batch = stacked_svd(blocks);

    CHECK(line_angle_deg(s.v.col(3), batch.matrixV().col(3)) < 1e-8);
    const Vec4 sv = batch.singularValues();
    CHECK((s.raw_singular_values() - sv).norm() / sv.norm() < 1e-8);
    for (int c = 0; c < 4; ++c) {
      // Gate per-vector agreement on a separated spectrum.
      const double gap_prev = c > 0 ? sv[c - 1] - sv[c] : std::numeric_limits<double>::infinity();
      const double gap_next = c < 3 ? sv[c] - sv[c + 1] : std::numeric_limits<double>::infinity();
      if (std::min(gap_prev, gap_next) > 1e-6) CHECK(line_angle_deg(s.v.col(c), batch.matrixV().col(c)) < 1e-8);
    }
  }
}

TEST_CASE("two identical blocks scale singular values by sqrt 2") {
  std::mt19937_64 rng(23);
  const Mat4 a = random_block(rng);
  const SvdState one = svd_init(a);
  const SvdState two = svd_update_square(one, a);
  CHECK((two.raw_singular_values() - std::sqrt(2.0) * one.raw_singular_values()).norm() < 1e-12);
  const auto batch = stacked_svd({a, a});
  CHECK((two.raw_singular_values() - batch.singularValues()).norm() < 1e-12);
}

TEST_CASE("singular values stay sorted, nonnegative and normalized") {
  std::mt19937_64 rng(24);
  SvdState s = svd_init(random_block(rng));
  for (int i = 0; i < 200; ++i) {
    s = svd_update_square(s, random_block(rng));
    for (int k = 0; k < 3; ++k) CHECK(s.singular_values[k] >= s.singular_values[k + 1]);
    CHECK(s.singular_values[3] >= 0.0);
    CHECK(s.singular_values[0] == doctest::Approx(1.0));
  }
}

TEST_CASE("V stays orthogonal over long streams") {
  std::mt19937_64 rng(25);
  SvdState s = svd_init(build_A(random_quaternion(rng), random_quaternion(rng)));
  for (int i = 0; i < 10000; ++i) {
    s = svd_update_square(s, build_A(random_quaternion(rng), random_quaternion(rng)));
    if (i % 500 == 0) REQUIRE(orthogonality_error(s.v) < 1e-9);
    REQUIRE(s.raw_singular_values().allFinite());
  }
  CHECK(orthogonality_error(s.v) < 1e-9);
  CHECK(s.frames_absorbed == 10001);
}

TEST_CASE("scale compensation keeps later blocks correctly weighted") {
  // Blocks of very different magnitude: normalization must not bias them.
  std::mt19937_64 rng(26);
  std::vector<Mat4> blocks;
  for (int i = 0; i < 40; ++i) blocks.push_back(random_block(rng) * (i % 2 == 0 ? 1e3 : 1e-2));
  const SvdState s = absorb(blocks);
  const auto batch = stacked_svd(blocks);
  CHECK((s.raw_singular_values() - batch.singularValues()).norm() / batch.singularValues().norm() < 1e-8);
  CHECK(line_angle_deg(s.v.col(3), batch.matrixV().col(3)) < 1e-8);
}

TEST_CASE("svd_solution") {
  SUBCASE("noise-free stream recovers the rig rotation") {
    std::mt19937_64 rng(27);
    for (int trial = 0; trial < 10; ++trial) {
      const SimilarityTransform rig = random_rig(300 + trial);
      SimConfig cfg;
      cfg.seed = 400 + trial;
      const Trajectory t0 = generate_master_trajectory(cfg);
      const Trajectory t1 = derive_slave_trajectory(t0, rig);
      SvdState s = svd_init(build_A(t0.poses[1].rotation, t1.poses[1].rotation));
      for (std::size_t t = 2; t < t0.size(); ++t) s = svd_update_square(s, build_A(t0.poses[t].rotation, t1.poses[t].rotation));
      CHECK(geodesic_angle(svd_solution(s), rig.rotation) < 1e-8);
    }
  }

  SUBCASE("single frame with equal rotations has the identity in its nullspace") {
    std::mt19937_64 rng(28);
    const UnitQuaternion q = random_quaternion(rng);
    const Mat4 a = build_A(q, q);
    const SvdState s = svd_init(a);
    CHECK(rotation_residual(a, svd_solution(s)) < 1e-12);
    CHECK((a * Vec4(1, 0, 0, 0)).norm() < 1e-15);
  }

  SUBCASE("invariant to positive scaling of the singular values") {
    std::mt19937_64 rng(29);
    SvdState s = svd_init(random_block(rng));
    s = svd_update_square(s, random_block(rng));
    SvdState scaled = s;
    scaled.singular_values *= 7.5;
    scaled.scale /= 7.5;
    CHECK(svd_solution(scaled).coeffs() == svd_solution(s).coeffs());
    CHECK(svd_conditioning(scaled) == doctest::Approx(svd_conditioning(s)));
  }

  SUBCASE("no frames") {
    SvdState empty;
    CHECK_THROWS_AS(svd_solution(empty), Error);
  }

  SUBCASE("agrees with the batch eigen solver on a single frame by cost") {
    // One A block always has paired singular values, so compare residuals.
    std::mt19937_64 rng(30);
    for (int i = 0; i < 50; ++i) {
      const Mat4 a = build_A(random_quaternion(rng), random_quaternion(rng));
      const UnitQuaternion online = svd_solution(svd_init(a));
      const std::vector<ConstraintMatrixA> one{a};
      const RotationSolution batch = solve_rotation_batch(one);
      CHECK(std::abs(rotation_residual(a, online) - rotation_residual(a, batch.rotation)) < 1e-10);
    }
  }
}

TEST_CASE("svd_conditioning") {
  CHECK(svd_conditioning(svd_init(Vec4(1, 1, 1, 0).asDiagonal().toDenseMatrix())) ==
        std::numeric_limits<double>::infinity());
  CHECK(svd_conditioning(svd_init(Vec4(5, 4, 3, 1.5).asDiagonal().toDenseMatrix())) == doctest::Approx(2.0));
}

TEST_CASE("thin_svd") {
  std::mt19937_64 rng(31);
  const Eigen::MatrixXd m = random_dense(rng, 6, 4);
  const ThinSvd f = thin_svd(m);
  CHECK((f.reconstruct() - m).norm() < 1e-12);
  CHECK(f.s.size() == 4);
}

TEST_CASE("svd_update_general") {
  std::mt19937_64 rng(32);

  SUBCASE("random 6x4 plus 3x4") {
    const Eigen::MatrixXd a = random_dense(rng, 6, 4);
    const Eigen::MatrixXd b = random_dense(rng, 3, 4);
    const ThinSvd up = svd_update_general(thin_svd(a), b);
    CHECK((up.reconstruct() - vstack(a, b)).norm() < 1e-9);
    CHECK((up.u.transpose() * up.u - Eigen::MatrixXd::Identity(up.u.cols(), up.u.cols())).norm() < 1e-9);
  }

  SUBCASE("rows inside span(V) leave nothing for the QL step") {
    // 2x4 of rank 2; appended rows are combinations of its rows.
    const Eigen::MatrixXd a = random_dense(rng, 2, 4);
    const Eigen::MatrixXd b = random_dense(rng, 3, 2) * a;
    const ThinSvd up = svd_update_general(thin_svd(a), b);
    CHECK(up.ql_rank == 0);
    CHECK((up.reconstruct() - vstack(a, b)).norm() < 1e-9);
  }

  SUBCASE("rows outside span(V) take the QL branch") {
    const Eigen::MatrixXd a = random_dense(rng, 2, 5);
    const Eigen::MatrixXd b = random_dense(rng, 2, 5);
    const ThinSvd up = svd_update_general(thin_svd(a), b);
    CHECK(up.ql_rank == 2);
    CHECK((up.reconstruct() - vstack(a, b)).norm() < 1e-9);
  }

  SUBCASE("appending zero rows leaves S unchanged") {
    const Eigen::MatrixXd a = random_dense(rng, 5, 4);
    const ThinSvd f = thin_svd(a);
    const ThinSvd up = svd_update_general(f, Eigen::MatrixXd::Zero(2, 4));
    REQUIRE(up.s.size() == f.s.size());
    CHECK((up.s - f.s).norm() < 1e-12);
    CHECK((up.reconstruct() - vstack(a, Eigen::MatrixXd::Zero(2, 4))).norm() < 1e-9);
  }

  SUBCASE("repeated updates") {
    Eigen::MatrixXd full = random_dense(rng, 1, 6);
    ThinSvd f = thin_svd(full);
    for (int i = 0; i < 10; ++i) {
      const Eigen::MatrixXd b = random_dense(rng, 1 + i % 3, 6);
      f = svd_update_general(f, b);
      full = vstack(full, b);
      CHECK((f.reconstruct() - full).norm() < 1e-9);
    }
  }
}
