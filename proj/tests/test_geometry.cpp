#include "rigcal/error.hpp"
#include "rigcal/geometry.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rigcal;
using rigcal::testing::random_motion;
using rigcal::testing::random_quaternion;
using rigcal::testing::random_vector;

namespace {

bool same_rotation(const UnitQuaternion& a, const UnitQuaternion& b, double tol) {
  return std::min((a.coeffs() - b.coeffs()).norm(), (a.coeffs() + b.coeffs()).norm()) <= tol;
}

bool canonical(const UnitQuaternion& q) {
  if (q.w() > 0.0) return true;
  if (q.w() < 0.0) return false;
  const double first = q.x() != 0.0 ? q.x() : (q.y() != 0.0 ? q.y() : q.z());
  return first > 0.0;
}

}  // namespace

TEST_CASE("unit quaternion construction normalizes and canonicalizes") {
  const UnitQuaternion q(-2.0, 0.0, 0.0, 0.0);
  CHECK(q.w() == 1.0);

  const UnitQuaternion h(0.0, -1.0, 0.0, 0.0);
  CHECK(h.x() == 1.0);
  const UnitQuaternion h2(0.0, 0.0, -3.0, 4.0);
  CHECK(h2.y() == doctest::Approx(0.6));
  CHECK(h2.z() == doctest::Approx(-0.8));

  CHECK_THROWS_AS(UnitQuaternion(0.0, 0.0, 0.0, 0.0), Error);
  CHECK_THROWS_AS(UnitQuaternion(NAN, 0.0, 0.0, 1.0), Error);
}

TEST_CASE("quat_multiply") {
  std::mt19937_64 rng(1);
  const UnitQuaternion q = random_quaternion(rng);
  CHECK(same_rotation(quat_multiply(UnitQuaternion::identity(), q), q, 1e-15));
  CHECK(same_rotation(quat_multiply(q, quat_conjugate(q)), UnitQuaternion::identity(), 1e-15));

  for (int i = 0; i < 100; ++i) {
    const UnitQuaternion a = random_quaternion(rng);
    const UnitQuaternion b = random_quaternion(rng);
    const UnitQuaternion c = random_quaternion(rng);
    CHECK(same_rotation(quat_multiply(quat_multiply(a, b), c), quat_multiply(a, quat_multiply(b, c)), 1e-12));
  }
}

TEST_CASE("quat_conjugate") {
  std::mt19937_64 rng(2);
  CHECK(same_rotation(quat_conjugate(UnitQuaternion::identity()), UnitQuaternion::identity(), 0.0));
  for (int i = 0; i < 100; ++i) {
    const UnitQuaternion q = random_quaternion(rng);
    CHECK(same_rotation(quat_conjugate(quat_conjugate(q)), q, 1e-15));
    const UnitQuaternion id = quat_multiply(q, quat_conjugate(q));
    CHECK(geodesic_angle(id, UnitQuaternion::identity()) < 1e-12);
  }
}

TEST_CASE("quat_to_matrix") {
  CHECK(quat_to_matrix(UnitQuaternion::identity()).isApprox(Mat3::Identity()));

  const double c = std::cos(std::numbers::pi / 4);
  Mat3 rx;
  rx << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  CHECK((quat_to_matrix(UnitQuaternion(c, c, 0, 0)) - rx).norm() < 1e-15);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const UnitQuaternion a = random_quaternion(rng);
    const UnitQuaternion b = random_quaternion(rng);
    const Mat3 ra = quat_to_matrix(a);
    CHECK((ra.transpose() * ra - Mat3::Identity()).norm() < 1e-10);
    CHECK(ra.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((quat_to_matrix(quat_multiply(a, b)) - ra * quat_to_matrix(b)).norm() < 1e-10);
    const Vec3 p = random_vector(rng);
    CHECK((a.rotate(p) - ra * p).norm() < 1e-12);
  }
}

TEST_CASE("matrix_to_quat") {
  CHECK(same_rotation(matrix_to_quat(Mat3::Identity()), UnitQuaternion::identity(), 0.0));

  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const UnitQuaternion q = random_quaternion(rng);
    const UnitQuaternion back = matrix_to_quat(quat_to_matrix(q));
    CHECK((back.coeffs() - q.coeffs()).norm() < 1e-10);
  }

  SUBCASE("half turn about z takes the diagonal branch") {
    Mat3 rz;
    rz << -1, 0, 0, 0, -1, 0, 0, 0, 1;
    const UnitQuaternion q = matrix_to_quat(rz);
    CHECK((q.coeffs() - Vec4(0, 0, 0, 1)).norm() < 1e-15);
  }

  SUBCASE("near-rotations are projected") {
    const UnitQuaternion q = random_quaternion(rng);
    Mat3 noisy = quat_to_matrix(q);
    noisy(0, 1) += 1e-7;
    noisy(2, 2) -= 2e-7;
    const UnitQuaternion back = matrix_to_quat(noisy);
    CHECK((quat_to_matrix(back) - noisy).norm() < 1e-6);
    CHECK(std::abs(back.coeffs().norm() - 1.0) < 1e-12);
  }

  SUBCASE("reflections and gross errors are rejected") {
    Mat3 reflection = Mat3::Identity();
    reflection(2, 2) = -1.0;
    CHECK_THROWS_AS(matrix_to_quat(reflection), Error);
    Mat3 stretched = 1.01 * Mat3::Identity();
    try {
      matrix_to_quat(stretched);
      FAIL("expected NotARotation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotARotation);
    }
  }
}

TEST_CASE("compose and invert") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const RigidMotion a = random_motion(rng);
    const RigidMotion b = random_motion(rng);
    const RigidMotion id = compose(RigidMotion::identity(), a);
    CHECK((id.translation - a.translation).norm() < 1e-15);
    CHECK(same_rotation(id.rotation, a.rotation, 1e-15));

    const RigidMotion aa = invert(invert(a));
    CHECK((aa.translation - a.translation).norm() < 1e-12);
    CHECK(same_rotation(aa.rotation, a.rotation, 1e-15));

    const RigidMotion e = compose(a, invert(a));
    CHECK(e.translation.norm() < 1e-10);
    CHECK(geodesic_angle(e.rotation, UnitQuaternion::identity()) < 1e-10);

    const Vec3 p = random_vector(rng, 5.0);
    CHECK((compose(a, b).apply(p) - a.apply(b.apply(p))).norm() < 1e-10);
  }
}

TEST_CASE("geodesic_angle") {
  std::mt19937_64 rng(6);
  const UnitQuaternion q = random_quaternion(rng);
  CHECK(geodesic_angle(q, q) == doctest::Approx(0.0));
  const UnitQuaternion neg(-q.w(), -q.x(), -q.y(), -q.z());
  CHECK(geodesic_angle(q, neg) == doctest::Approx(0.0));
  const double c = std::cos(std::numbers::pi / 4);
  CHECK(geodesic_angle(UnitQuaternion::identity(), UnitQuaternion(c, c, 0, 0)) == doctest::Approx(90.0));

  for (int i = 0; i < 200; ++i) {
    const UnitQuaternion a = random_quaternion(rng);
    const UnitQuaternion b = random_quaternion(rng);
    const UnitQuaternion d = random_quaternion(rng);
    const double ab = geodesic_angle(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab <= 180.0);
    CHECK(ab == doctest::Approx(geodesic_angle(b, a)).epsilon(1e-12));
    CHECK(geodesic_angle(a, d) <= ab + geodesic_angle(b, d) + 1e-9);
  }
}

TEST_CASE("every emitted quaternion is unit and canonical") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const UnitQuaternion a = random_quaternion(rng);
    const UnitQuaternion b = random_quaternion(rng);
    for (const UnitQuaternion& q :
         {quat_multiply(a, b), quat_conjugate(a), matrix_to_quat(quat_to_matrix(b)),
          UnitQuaternion::from_rotation_vector(random_vector(rng, 2.0)), compose({a, Vec3::Zero()}, {b, Vec3::Zero()}).rotation}) {
      CHECK(std::abs(q.coeffs().squaredNorm() - 1.0) < 1e-12);
      CHECK(canonical(q));
    }
  }
}

TEST_CASE("axis and angle") {
  const UnitQuaternion q = UnitQuaternion::from_axis_angle(Vec3(0, 0, 2), 0.5);
  CHECK(q.angle() == doctest::Approx(0.5));
  CHECK((q.axis() - Vec3::UnitZ()).norm() < 1e-15);
  // canonical form flips the axis of angles above pi
  const UnitQuaternion big = UnitQuaternion::from_axis_angle(Vec3::UnitX(), 1.5 * std::numbers::pi);
  CHECK(big.angle() == doctest::Approx(0.5 * std::numbers::pi));
  CHECK((big.axis() + Vec3::UnitX()).norm() < 1e-12);
}

TEST_CASE("similarity transform validity") {
  CHECK(SimilarityTransform::identity().is_valid());
  SimilarityTransform s;
  s.scale = 0.0;
  CHECK_FALSE(s.is_valid());
  s.scale = -1.0;
  CHECK_FALSE(s.is_valid());
}
