#include "rigcal/rls.hpp"

#include "rigcal/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

namespace rigcal {

RlsState rls_init(double forgetting, double c0_scale) {
  if (!(forgetting > 0.0 && forgetting <= 1.0)) {
    throw Error(ErrorKind::InvalidForgetting, "forgetting factor must lie in (0, 1], got " + std::to_string(forgetting));
  }
  if (!(c0_scale > 0.0) || !std::isfinite(c0_scale)) {
    throw Error(ErrorKind::InvalidArgument, "c0_scale must be positive, got " + std::to_string(c0_scale));
  }
  RlsState state;
  state.forgetting = forgetting;
  state.c = c0_scale * Mat4::Identity();
  return state;
}

RlsState rls_update(const RlsState& state, const RlsObservation& obs) {
  const double inv_lambda = 1.0 / state.forgetting;
  const ConstraintMatrixB& b = obs.b;
  const Mat4 predicted = inv_lambda * state.c;

  const Mat3 gamma_inv = Mat3::Identity() + b * predicted * b.transpose();
  Eigen::FullPivLU<Mat3> lu(gamma_inv);
  if (!lu.isInvertible()) throw Error(ErrorKind::NumericalBreakdown, "gain matrix is singular");
  // G = C B^T Gamma / lambda, via a solve (Gamma^-1 is symmetric).
  const Eigen::Matrix<double, 4, 3> gain = lu.solve(b * predicted).transpose();

  RlsState next = state;
  next.x = state.x + gain * (obs.target - b * state.x);
  // Joseph form of C / lambda - G Gamma^-1 G^T. Same value in exact
  // arithmetic, but it does not cancel catastrophically when C is large.
  const Mat4 i_minus_gb = Mat4::Identity() - gain * b;
  const Mat4 c = i_minus_gb * predicted * i_minus_gb.transpose() + gain * gain.transpose();
  next.c = 0.5 * (c + c.transpose());
  ++next.blocks_absorbed;

  if (!next.x.allFinite() || !next.c.allFinite()) {
    throw Error(ErrorKind::NumericalBreakdown, "non-finite state after update");
  }
  return next;
}

TranslationScale rls_estimate(const RlsState& state) { return {state.x.head<3>(), state.x[3]}; }

}  // namespace rigcal
