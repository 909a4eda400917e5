#pragma once

#include "rigcal/geometry.hpp"
#include "rigcal/incremental_svd.hpp"
#include "rigcal/rls.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace rigcal {

struct CalibratorConfig {
  double forgetting = 1.0;
  /// Translation is estimated from this frame on (frames count from 1).
  std::size_t warmup_frames = 60;
  double c0_scale = 1.0;
  /// sigma_3 / sigma_4 below this flags the rotation as ill-conditioned.
  double conditioning_threshold = 10.0;
  /// Build constraints from the frame-to-frame motions themselves instead of
  /// poses accumulated relative to frame 0.
  bool use_relative_constraints = false;
  /// Keep warm-up frames and replay them through RLS, with the rotation
  /// estimate current at that time, when translation estimation starts.
  bool buffer_warmup = false;

  /// Throws InvalidForgetting / InvalidArgument.
  void validate() const;
};

struct CalibrationEstimate {
  /// Translation and scale are zero while `translation_active` is false.
  SimilarityTransform transform{UnitQuaternion::identity(), Vec3::Zero(), 0.0};
  double rotation_conditioning = 1.0;
  bool rotation_ill_conditioned = true;
  bool translation_active = false;
  /// ||T1|| / ||T0|| of this step's frame-to-frame motions; NaN when camera 0
  /// did not translate. Jumps reveal per-camera scale drift in the input.
  double translation_magnitude_ratio = 0.0;
  std::size_t frame = 0;
};

/// Online estimator: one motion pair per step, rotation by incremental SVD,
/// then translation and scale by RLS. Constant cost per step.
class OnlineCalibrator {
 public:
  explicit OnlineCalibrator(CalibratorConfig config = {});

  /// `motion0` and `motion1` are the two cameras' ego-motions over the same
  /// interval, each expressed in its camera's previous frame.
  const CalibrationEstimate& step(const RigidMotion& motion0, const RigidMotion& motion1);

  /// Estimate of the most recent step. Throws NoData before the first step.
  const CalibrationEstimate& finalize() const;

  std::size_t frame() const { return frame_; }
  const CalibratorConfig& config() const { return config_; }
  const std::optional<SvdState>& svd() const { return svd_; }
  const RlsState& rls() const { return rls_; }
  const RigidMotion& pose0() const { return pose0_; }
  const RigidMotion& pose1() const { return pose1_; }

 private:
  struct BufferedFrame {
    Mat3 r0;
    Vec3 t0;
    Vec3 t1;
  };

  void absorb_translation(const Mat3& r0, const Vec3& t0, const Vec3& t1, const Mat3& delta_r);

  CalibratorConfig config_;
  std::optional<SvdState> svd_;
  RlsState rls_;
  RigidMotion pose0_;
  RigidMotion pose1_;
  std::size_t frame_ = 0;
  std::vector<BufferedFrame> warmup_buffer_;
  CalibrationEstimate last_;
};

}  // namespace rigcal
