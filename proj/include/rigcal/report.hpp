#pragma once

#include "rigcal/geometry.hpp"
#include "rigcal/online.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rigcal {

struct FrameErrorRecord {
  std::size_t frame = 0;
  double rot_geodesic_deg = 0.0;
  /// Angle between estimated and true rotation axes; 0 when either rotation
  /// is below 1e-8 rad and its axis is meaningless.
  double rot_axis_angle_deg = 0.0;
  /// 180 when exactly one of the two translations is zero.
  double trans_direction_deg = 0.0;
  double trans_norm_err = 0.0;
  double scale_rel_err = 0.0;
  double conditioning = 0.0;
  bool translation_active = false;
};

inline constexpr std::string_view kErrorCsvHeader =
    "frame,rot_geodesic_deg,rot_axis_angle_deg,trans_direction_deg,trans_norm_err,scale_rel_err,conditioning,"
    "translation_active";

inline constexpr std::string_view kEstimateCsvHeader =
    "frame,qw,qx,qy,qz,tx,ty,tz,scale,conditioning,translation_active,translation_magnitude_ratio";

/// Angle in degrees between two directions, in [0, 180].
double direction_angle_deg(const Vec3& a, const Vec3& b);

FrameErrorRecord compute_frame_errors(const CalibrationEstimate& estimate, const SimilarityTransform& truth);

/// Round-trip exact formatting (17 significant digits; inf/nan spelled out).
std::string format_number(double value);

void write_error_csv(std::ostream& out, const std::vector<FrameErrorRecord>& records);
void write_error_csv(const std::filesystem::path& path, const std::vector<FrameErrorRecord>& records);

void write_estimates_csv(std::ostream& out, const std::vector<CalibrationEstimate>& estimates);
void write_estimates_csv(const std::filesystem::path& path, const std::vector<CalibrationEstimate>& estimates);
/// Throws ParseError on a wrong header or malformed row.
std::vector<CalibrationEstimate> read_estimates_csv(std::istream& in);
std::vector<CalibrationEstimate> read_estimates_csv(const std::filesystem::path& path);

struct PlotCurve {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "frame";
  std::string y_label;
  bool log_y = true;
  int width = 720;
  int height = 420;
};

/// Standalone SVG line chart, one polyline per curve. Nonpositive values are
/// clamped to the smallest positive value on a log axis.
std::string render_svg(const std::vector<PlotCurve>& curves, const PlotOptions& options);
void write_svg(const std::filesystem::path& path, const std::vector<PlotCurve>& curves, const PlotOptions& options);

}  // namespace rigcal
