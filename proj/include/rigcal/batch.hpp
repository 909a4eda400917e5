#pragma once

#include "rigcal/geometry.hpp"
#include "rigcal/handeye.hpp"
#include "rigcal/rls.hpp"

#include <optional>
#include <span>

namespace rigcal {

struct RotationSolution {
  UnitQuaternion rotation;
  /// Eigenvalues of sum A^T A, ascending.
  Vec4 eigenvalues = Vec4::Zero();
  /// Two smallest eigenvalues within 1e-9 of the largest: the rig rotation
  /// is not determined by the data. The returned rotation is still a minimizer.
  bool ill_conditioned = false;
};

/// Minimizer of sum_t ||A_t dq||^2 over unit dq: the eigenvector of the
/// accumulated normal matrix with the smallest eigenvalue.
RotationSolution solve_rotation_batch(std::span<const ConstraintMatrixA> constraints);

/// Weights lambda^(N-t) on block t of N, plus the prior lambda^N ||x||^2 / c0.
/// This is the objective exponentially weighted RLS minimizes.
struct ExponentialProfile {
  double forgetting = 1.0;
  double c0_scale = 1.0;
};

/// Least-squares (dT, dlambda) via column-pivoted QR. Without a profile the
/// stacked B must have rank 4 (throws RankDeficient otherwise); with a
/// profile the prior term keeps the problem well posed.
TranslationScale solve_translation_batch(std::span<const RlsObservation> observations,
                                         std::optional<ExponentialProfile> profile = std::nullopt);

struct BatchCalibration {
  SimilarityTransform transform;
  RotationSolution rotation;
};

/// Two-stage calibration over frames 1..N: rotation from all A_t, then every
/// B_t is built with that rotation and translation + scale solved.
/// Throws LengthMismatch for unequal lengths, RankDeficient with no motion.
BatchCalibration calibrate_batch(const Trajectory& camera0, const Trajectory& camera1);

}  // namespace rigcal
