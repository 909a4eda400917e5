#pragma once

#include "rigcal/geometry.hpp"
#include "rigcal/handeye.hpp"

#include <Eigen/Core>

#include <cstddef>

namespace rigcal {

/// Right singular factorization of the growing stack (A_1; A_2; ...; A_t).
///
/// The left factor U is never formed. `singular_values` are stored divided by
/// `scale` (so the largest is 1 once anything nonzero was absorbed); the raw
/// singular values of the stack are `singular_values * scale`.
struct SvdState {
  Vec4 singular_values = Vec4::Zero();
  Mat4 v = Mat4::Identity();
  double scale = 1.0;
  std::size_t frames_absorbed = 0;
  std::size_t updates_since_orthonormalization = 0;

  Vec4 raw_singular_values() const { return singular_values * scale; }
};

/// V is re-orthonormalized after this many updates, or earlier on drift.
inline constexpr std::size_t kOrthonormalizationPeriod = 256;
inline constexpr double kOrthogonalityDriftLimit = 1e-9;

SvdState svd_init(const ConstraintMatrixA& a1);

/// Square-case update: SVD of [S; A V] = U~ S~ V~^T, then S <- S~, V <- V V~.
SvdState svd_update_square(const SvdState& state, const ConstraintMatrixA& a);

/// Column of V belonging to the smallest singular value, as a quaternion.
UnitQuaternion svd_solution(const SvdState& state);

/// sigma_3 / sigma_4. Infinite when sigma_4 is zero and sigma_3 is not; 1 when
/// both vanish (nothing observable).
double svd_conditioning(const SvdState& state);

/// ||V^T V - I||_F
double orthogonality_error(const Mat4& v);

/// Thin SVD U diag(S) V^T of a dense matrix, in the general (non-square) form.
struct ThinSvd {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
  Eigen::MatrixXd v;
  /// Rank of the component of appended rows orthogonal to span(V) in the last
  /// update; 0 when the new rows were entirely inside span(V).
  Eigen::Index ql_rank = 0;

  Eigen::MatrixXd reconstruct() const { return u * s.asDiagonal() * v.transpose(); }
};

ThinSvd thin_svd(const Eigen::MatrixXd& m);

/// Appends rows `b` (m x n) to the matrix factored by `current`:
///   1. Q L = (I - V V^T) B^T, keeping only the numerically nonzero directions
///   2. U~ S~ V~^T = [[S, 0], [B V, L^T]]
///   3. U <- blkdiag(U, I) U~,  S <- S~,  V <- [V Q] V~
ThinSvd svd_update_general(const ThinSvd& current, const Eigen::MatrixXd& b);

}  // namespace rigcal
