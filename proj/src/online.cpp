#include "rigcal/online.hpp"

#include "rigcal/error.hpp"
#include "rigcal/handeye.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rigcal {

void CalibratorConfig::validate() const {
  if (!(forgetting > 0.0 && forgetting <= 1.0)) {
    throw Error(ErrorKind::InvalidForgetting, "forgetting factor must lie in (0, 1], got " + std::to_string(forgetting));
  }
  if (!(c0_scale > 0.0) || !std::isfinite(c0_scale)) {
    throw Error(ErrorKind::InvalidArgument, "c0_scale must be positive");
  }
  if (!(conditioning_threshold > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "conditioning_threshold must be positive");
  }
}

OnlineCalibrator::OnlineCalibrator(CalibratorConfig config) : config_(config) {
  config_.validate();
  rls_ = rls_init(config_.forgetting, config_.c0_scale);
}

void OnlineCalibrator::absorb_translation(const Mat3& r0, const Vec3& t0, const Vec3& t1, const Mat3& delta_r) {
  rls_ = rls_update(rls_, {build_B(r0, delta_r, t1), t0});
}

const CalibrationEstimate& OnlineCalibrator::step(const RigidMotion& motion0, const RigidMotion& motion1) {
  pose0_ = compose(pose0_, motion0);
  pose1_ = compose(pose1_, motion1);
  ++frame_;

  const RigidMotion& c0 = config_.use_relative_constraints ? motion0 : pose0_;
  const RigidMotion& c1 = config_.use_relative_constraints ? motion1 : pose1_;

  const ConstraintMatrixA a = build_A(c0.rotation, c1.rotation);
  svd_ = svd_ ? svd_update_square(*svd_, a) : svd_init(a);
  const UnitQuaternion delta_q = svd_solution(*svd_);
  const Mat3 delta_r = quat_to_matrix(delta_q);
  const Mat3 r0 = quat_to_matrix(c0.rotation);

  const bool active = frame_ >= config_.warmup_frames;
  if (active) {
    if (!warmup_buffer_.empty()) {
      for (const BufferedFrame& f : warmup_buffer_) absorb_translation(f.r0, f.t0, f.t1, delta_r);
      warmup_buffer_.clear();
      warmup_buffer_.shrink_to_fit();
    }
    absorb_translation(r0, c0.translation, c1.translation, delta_r);
  } else if (config_.buffer_warmup) {
    warmup_buffer_.push_back({r0, c0.translation, c1.translation});
  }

  CalibrationEstimate est;
  est.frame = frame_;
  est.transform.rotation = delta_q;
  if (active) {
    const TranslationScale ts = rls_estimate(rls_);
    est.transform.translation = ts.translation;
    est.transform.scale = ts.scale;
  }
  est.translation_active = active;
  est.rotation_conditioning = svd_conditioning(*svd_);
  est.rotation_ill_conditioned = !(est.rotation_conditioning >= config_.conditioning_threshold);
  const double n0 = motion0.translation.norm();
  est.translation_magnitude_ratio =
      n0 > 0.0 ? motion1.translation.norm() / n0 : std::numeric_limits<double>::quiet_NaN();
  last_ = est;
  return last_;
}

const CalibrationEstimate& OnlineCalibrator::finalize() const {
  if (frame_ == 0) throw Error(ErrorKind::NoData, "no frames processed");
  return last_;
}

}  // namespace rigcal
