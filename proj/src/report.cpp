#include "rigcal/report.hpp"

#include "rigcal/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace rigcal {

namespace {

constexpr double kAxisGateRad = 1e-8;

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, std::size_t line, std::size_t column) {
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || end != cell.data() + cell.size()) {
    throw ParseError(line, column, "not a number: '" + cell + "'");
  }
  return v;
}

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

double direction_angle_deg(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b)) * 180.0 / std::numbers::pi;
}

FrameErrorRecord compute_frame_errors(const CalibrationEstimate& estimate, const SimilarityTransform& truth) {
  const SimilarityTransform& est = estimate.transform;
  FrameErrorRecord r;
  r.frame = estimate.frame;
  r.rot_geodesic_deg = geodesic_angle(est.rotation, truth.rotation);
  if (est.rotation.angle() >= kAxisGateRad && truth.rotation.angle() >= kAxisGateRad) {
    r.rot_axis_angle_deg = direction_angle_deg(est.rotation.axis(), truth.rotation.axis());
  }
  const double est_norm = est.translation.norm();
  const double true_norm = truth.translation.norm();
  if (est_norm > 0.0 && true_norm > 0.0) {
    r.trans_direction_deg = direction_angle_deg(est.translation, truth.translation);
  } else if (est_norm > 0.0 || true_norm > 0.0) {
    r.trans_direction_deg = 180.0;
  }
  r.trans_norm_err = (est.translation - truth.translation).norm();
  r.scale_rel_err = std::abs(est.scale - truth.scale) / truth.scale;
  r.conditioning = estimate.rotation_conditioning;
  r.translation_active = estimate.translation_active;
  return r;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_error_csv(std::ostream& out, const std::vector<FrameErrorRecord>& records) {
  out << kErrorCsvHeader << '\n';
  for (const FrameErrorRecord& r : records) {
    out << r.frame << ',' << format_number(r.rot_geodesic_deg) << ',' << format_number(r.rot_axis_angle_deg) << ','
        << format_number(r.trans_direction_deg) << ',' << format_number(r.trans_norm_err) << ','
        << format_number(r.scale_rel_err) << ',' << format_number(r.conditioning) << ','
        << (r.translation_active ? 1 : 0) << '\n';
  }
}

void write_error_csv(const std::filesystem::path& path, const std::vector<FrameErrorRecord>& records) {
  std::ofstream out = open_for_writing(path);
  write_error_csv(out, records);
}

void write_estimates_csv(std::ostream& out, const std::vector<CalibrationEstimate>& estimates) {
  out << kEstimateCsvHeader << '\n';
  for (const CalibrationEstimate& e : estimates) {
    const SimilarityTransform& t = e.transform;
    out << e.frame << ',' << format_number(t.rotation.w()) << ',' << format_number(t.rotation.x()) << ','
        << format_number(t.rotation.y()) << ',' << format_number(t.rotation.z()) << ','
        << format_number(t.translation.x()) << ',' << format_number(t.translation.y()) << ','
        << format_number(t.translation.z()) << ',' << format_number(t.scale) << ','
        << format_number(e.rotation_conditioning) << ',' << (e.translation_active ? 1 : 0) << ','
        << format_number(e.translation_magnitude_ratio) << '\n';
  }
}

void write_estimates_csv(const std::filesystem::path& path, const std::vector<CalibrationEstimate>& estimates) {
  std::ofstream out = open_for_writing(path);
  write_estimates_csv(out, estimates);
}

std::vector<CalibrationEstimate> read_estimates_csv(std::istream& in) {
  std::string text;
  if (!std::getline(in, text)) throw ParseError(1, ParseError::npos, "missing header");
  if (!text.empty() && text.back() == '\r') text.pop_back();
  if (text != kEstimateCsvHeader) throw ParseError(1, ParseError::npos, "unexpected header");

  std::vector<CalibrationEstimate> out;
  std::size_t line = 1;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    const std::vector<std::string> cells = split_csv(text);
    if (cells.size() != 12) throw ParseError(line, ParseError::npos, "expected 12 columns");
    std::vector<double> v(12);
    for (std::size_t i = 0; i < 12; ++i) v[i] = parse_cell(cells[i], line, i);
    CalibrationEstimate e;
    e.frame = static_cast<std::size_t>(v[0]);
    try {
      e.transform.rotation = UnitQuaternion(v[1], v[2], v[3], v[4]);
    } catch (const Error&) {
      throw ParseError(line, 1, "invalid quaternion");
    }
    e.transform.translation = Vec3(v[5], v[6], v[7]);
    e.transform.scale = v[8];
    e.rotation_conditioning = v[9];
    e.translation_active = v[10] != 0.0;
    e.translation_magnitude_ratio = v[11];
    out.push_back(e);
  }
  return out;
}

std::vector<CalibrationEstimate> read_estimates_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return read_estimates_csv(in);
}

std::string render_svg(const std::vector<PlotCurve>& curves, const PlotOptions& options) {
  const double left = 70, right = 150, top = 40, bottom = 50;
  const double plot_w = options.width - left - right;
  const double plot_h = options.height - top - bottom;

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  double min_positive = x_min;
  for (const PlotCurve& c : curves) {
    for (std::size_t i = 0; i < c.x.size() && i < c.y.size(); ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
      x_min = std::min(x_min, c.x[i]);
      x_max = std::max(x_max, c.x[i]);
      y_min = std::min(y_min, c.y[i]);
      y_max = std::max(y_max, c.y[i]);
      if (c.y[i] > 0.0) min_positive = std::min(min_positive, c.y[i]);
    }
  }
  if (!std::isfinite(x_min)) x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  if (!std::isfinite(min_positive)) min_positive = 1e-12;

  const auto ty = [&](double y) {
    if (options.log_y) return std::log10(std::max(y, min_positive));
    return y;
  };
  double lo = options.log_y ? std::floor(ty(min_positive)) : y_min;
  double hi = options.log_y ? std::ceil(ty(std::max(y_max, min_positive))) : y_max;
  if (hi <= lo) hi = lo + 1.0;
  if (x_max <= x_min) x_max = x_min + 1.0;

  const auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  const auto py = [&](double y) { return top + (1.0 - (ty(y) - lo) / (hi - lo)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
      << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << options.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"15\">" << escape_xml(options.title) << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // y ticks: decades on a log axis, five intervals otherwise
  const int ticks = options.log_y ? static_cast<int>(hi - lo) : 5;
  for (int i = 0; i <= ticks; ++i) {
    const double v = lo + (hi - lo) * i / ticks;
    const double y = top + (1.0 - (v - lo) / (hi - lo)) * plot_h;
    const std::string label = options.log_y ? "1e" + std::to_string(static_cast<int>(std::lround(v))) : fixed(v, 3);
    svg << "<line x1=\"" << left - 4 << "\" y1=\"" << fixed(y) << "\" x2=\"" << left + plot_w << "\" y2=\""
        << fixed(y) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"11\">" << label << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = x_min + (x_max - x_min) * i / 4;
    svg << "<text x=\"" << fixed(px(v)) << "\" y=\"" << top + plot_h + 16 << "\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"11\">" << fixed(v, 0) << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << options.height - 10 << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(options.x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\" transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">" << escape_xml(options.y_label)
      << "</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const PlotCurve& curve = curves[c];
    const char* color = kPalette[c % std::size(kPalette)];
    svg << "<polyline class=\"curve\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < curve.x.size() && i < curve.y.size(); ++i) {
      if (!std::isfinite(curve.x[i]) || !std::isfinite(curve.y[i])) continue;
      svg << (first ? "" : " ") << fixed(px(curve.x[i])) << ',' << fixed(py(curve.y[i]));
      first = false;
    }
    svg << "\"/>\n";
    const double ly = top + 14 + 18 * static_cast<double>(c);
    svg << "<line x1=\"" << left + plot_w + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 30 << "\" y2=\""
        << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + plot_w + 34 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << escape_xml(curve.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_svg(const std::filesystem::path& path, const std::vector<PlotCurve>& curves, const PlotOptions& options) {
  std::ofstream out = open_for_writing(path);
  out << render_svg(curves, options);
}

}  // namespace rigcal
