#include "rigcal/batch.hpp"

#include "rigcal/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <string>
#include <vector>

namespace rigcal {

namespace {

constexpr double kEigenTieTolerance = 1e-9;
constexpr double kRankTolerance = 1e-10;

}  // namespace

RotationSolution solve_rotation_batch(std::span<const ConstraintMatrixA> constraints) {
  if (constraints.empty()) throw Error(ErrorKind::NoData, "no rotation constraints");
  Mat4 normal = Mat4::Zero();
  for (const ConstraintMatrixA& a : constraints) normal.noalias() += a.transpose() * a;

  Eigen::SelfAdjointEigenSolver<Mat4> eig(normal);
  RotationSolution out;
  out.eigenvalues = eig.eigenvalues();
  out.rotation = UnitQuaternion(Vec4(eig.eigenvectors().col(0)));
  const double largest = std::max(out.eigenvalues[3], 0.0);
  out.ill_conditioned = (out.eigenvalues[1] - out.eigenvalues[0]) <= kEigenTieTolerance * largest;
  return out;
}

TranslationScale solve_translation_batch(std::span<const RlsObservation> observations,
                                         std::optional<ExponentialProfile> profile) {
  const auto n = static_cast<Eigen::Index>(observations.size());
  const Eigen::Index prior_rows = profile ? 4 : 0;
  if (n == 0 && !profile) throw Error(ErrorKind::RankDeficient, "no translation observations");

  Eigen::MatrixXd lhs(3 * n + prior_rows, 4);
  Eigen::VectorXd rhs(3 * n + prior_rows);
  for (Eigen::Index t = 0; t < n; ++t) {
    double w = 1.0;
    if (profile) w = std::sqrt(std::pow(profile->forgetting, static_cast<double>(n - 1 - t)));
    lhs.middleRows<3>(3 * t) = w * observations[t].b;
    rhs.segment<3>(3 * t) = w * observations[t].target;
  }
  if (profile) {
    const double w = std::sqrt(std::pow(profile->forgetting, static_cast<double>(n)) / profile->c0_scale);
    lhs.bottomRows(4) = w * Mat4::Identity();
    rhs.tail(4).setZero();
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(lhs);
  qr.setThreshold(kRankTolerance);
  if (!profile && qr.rank() < 4) {
    throw Error(ErrorKind::RankDeficient,
                "stacked translation constraints have rank " + std::to_string(qr.rank()) + " < 4");
  }
  const Vec4 x = qr.solve(rhs);
  return {x.head<3>(), x[3]};
}

BatchCalibration calibrate_batch(const Trajectory& camera0, const Trajectory& camera1) {
  if (camera0.size() != camera1.size()) {
    throw Error(ErrorKind::LengthMismatch, "trajectories have " + std::to_string(camera0.size()) + " and " +
                                               std::to_string(camera1.size()) + " poses");
  }
  if (camera0.size() < 2) throw Error(ErrorKind::RankDeficient, "need at least two poses (no motion)");

  std::vector<ConstraintMatrixA> rotations;
  rotations.reserve(camera0.size() - 1);
  for (std::size_t t = 1; t < camera0.size(); ++t) {
    rotations.push_back(build_A(camera0.poses[t].rotation, camera1.poses[t].rotation));
  }
  BatchCalibration out;
  out.rotation = solve_rotation_batch(rotations);

  const Mat3 delta_r = quat_to_matrix(out.rotation.rotation);
  std::vector<RlsObservation> translations;
  translations.reserve(camera0.size() - 1);
  for (std::size_t t = 1; t < camera0.size(); ++t) {
    const RigidMotion& p0 = camera0.poses[t];
    translations.push_back({build_B(quat_to_matrix(p0.rotation), delta_r, camera1.poses[t].translation),
                            p0.translation});
  }
  const TranslationScale ts = solve_translation_batch(translations);
  out.transform = {out.rotation.rotation, ts.translation, ts.scale};
  return out;
}

}  // namespace rigcal
