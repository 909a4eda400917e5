#pragma once

#include "rigcal/geometry.hpp"
#include "rigcal/handeye.hpp"

#include <cstddef>

namespace rigcal {

/// Exponentially weighted block RLS over x = (dT, dlambda).
struct RlsState {
  Vec4 x = Vec4::Zero();
  Mat4 c = Mat4::Identity();
  double forgetting = 1.0;
  std::size_t blocks_absorbed = 0;
};

struct RlsObservation {
  ConstraintMatrixB b;
  Vec3 target;  // T0 of the frame
};

/// x = 0, C = c0_scale * I. Throws InvalidForgetting unless forgetting is in
/// (0, 1], InvalidArgument unless c0_scale > 0.
RlsState rls_init(double forgetting = 1.0, double c0_scale = 1.0);

/// One block update with gain Gamma = (I3 + B C B^T / lambda)^-1 and
///   G = C B^T Gamma / lambda
///   x <- x + G (b - B x)
///   C <- C / lambda - G Gamma^-1 G^T
/// The covariance is evaluated in the equivalent Joseph form
///   (I - G B)(C / lambda)(I - G B)^T + G G^T
/// and re-symmetrized. Throws NumericalBreakdown if Gamma^-1 is
/// singular or the result is not finite.
RlsState rls_update(const RlsState& state, const RlsObservation& obs);

struct TranslationScale {
  Vec3 translation = Vec3::Zero();
  double scale = 0.0;
};

TranslationScale rls_estimate(const RlsState& state);

}  // namespace rigcal
