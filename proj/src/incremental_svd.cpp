#include "rigcal/incremental_svd.hpp"

#include "rigcal/error.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <limits>

namespace rigcal {

namespace {

Mat4 nearest_orthogonal(const Mat4& v) {
  Eigen::JacobiSVD<Mat4> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

void normalize(SvdState& state) {
  const double largest = state.singular_values[0];
  if (largest > 0.0) {
    state.singular_values /= largest;
    state.scale *= largest;
  }
}

}  // namespace

double orthogonality_error(const Mat4& v) { return (v.transpose() * v - Mat4::Identity()).norm(); }

SvdState svd_init(const ConstraintMatrixA& a1) {
  SvdState state;
  state.frames_absorbed = 1;
  if (a1.isZero(0.0)) return state;
  Eigen::JacobiSVD<Mat4> svd(a1, Eigen::ComputeFullV);
  state.singular_values = svd.singularValues();
  state.v = svd.matrixV();
  state.scale = 1.0;
  normalize(state);
  return state;
}

SvdState svd_update_square(const SvdState& state, const ConstraintMatrixA& a) {
  // Rows of the stack are held at 1/scale, so the new block is too.
  Eigen::Matrix<double, 8, 4> stacked;
  stacked.topRows<4>() = state.singular_values.asDiagonal();
  stacked.bottomRows<4>() = a * state.v / state.scale;

  Eigen::JacobiSVD<Eigen::Matrix<double, 8, 4>> svd(stacked, Eigen::ComputeFullV);

  SvdState next;
  next.singular_values = svd.singularValues();
  next.v = state.v * svd.matrixV();
  next.scale = state.scale;
  next.frames_absorbed = state.frames_absorbed + 1;
  next.updates_since_orthonormalization = state.updates_since_orthonormalization + 1;
  normalize(next);

  if (next.updates_since_orthonormalization >= kOrthonormalizationPeriod ||
      orthogonality_error(next.v) > kOrthogonalityDriftLimit) {
    next.v = nearest_orthogonal(next.v);
    next.updates_since_orthonormalization = 0;
  }
  return next;
}

UnitQuaternion svd_solution(const SvdState& state) {
  if (state.frames_absorbed == 0) throw Error(ErrorKind::NoData, "no constraint absorbed yet");
  return UnitQuaternion(Vec4(state.v.col(3)));
}

double svd_conditioning(const SvdState& state) {
  const double s3 = state.singular_values[2];
  const double s4 = state.singular_values[3];
  if (s4 > 0.0) return s3 / s4;
  return s3 > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

ThinSvd thin_svd(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV(), 0};
}

ThinSvd svd_update_general(const ThinSvd& current, const Eigen::MatrixXd& b) {
  const Eigen::Index k = current.s.size();
  const Eigen::Index n = current.v.rows();
  const Eigen::Index r = current.u.rows();
  const Eigen::Index m = b.rows();
  if (b.cols() != n || current.v.cols() != k || current.u.cols() != k) {
    throw Error(ErrorKind::InvalidArgument, "factor dimensions do not match appended rows");
  }

  // Component of the new rows outside span(V); projected twice to keep Q
  // orthogonal to V in finite precision.
  Eigen::MatrixXd residual = b.transpose() - current.v * (current.v.transpose() * b.transpose());
  residual -= current.v * (current.v.transpose() * residual);

  const double tolerance =
      std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(n, m)) *
      std::max({1.0, b.norm(), current.s.size() > 0 ? current.s.maxCoeff() : 0.0});
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> ql(residual);
  Eigen::Index p = 0;
  if (ql.maxPivot() > tolerance) {
    ql.setThreshold(tolerance / ql.maxPivot());
    p = std::min(ql.rank(), n - k);
  }

  Eigen::MatrixXd q(n, p);
  Eigen::MatrixXd l(p, m);
  if (p > 0) {
    const Eigen::MatrixXd q_full = ql.householderQ() * Eigen::MatrixXd::Identity(n, p);
    q = q_full;
    l = q.transpose() * residual;
  }

  Eigen::MatrixXd inner = Eigen::MatrixXd::Zero(k + m, k + p);
  inner.topLeftCorner(k, k) = current.s.asDiagonal();
  inner.bottomLeftCorner(m, k) = b * current.v;
  if (p > 0) inner.bottomRightCorner(m, p) = l.transpose();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(inner, Eigen::ComputeThinU | Eigen::ComputeThinV);

  Eigen::MatrixXd left = Eigen::MatrixXd::Zero(r + m, k + m);
  left.topLeftCorner(r, k) = current.u;
  left.bottomRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m);

  Eigen::MatrixXd right(n, k + p);
  right.leftCols(k) = current.v;
  if (p > 0) right.rightCols(p) = q;

  return {left * svd.matrixU(), svd.singularValues(), right * svd.matrixV(), p};
}

}  // namespace rigcal
