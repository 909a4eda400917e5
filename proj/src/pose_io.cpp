#include "rigcal/pose_io.hpp"

#include "rigcal/error.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace rigcal {

namespace {

constexpr double kQuaternionNormTolerance = 1e-3;

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

double parse_number(std::string_view token, std::size_t line, std::size_t index) {
  // from_chars rejects a leading '+', which some writers emit.
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) {
    throw ParseError(line, index, "not a number: '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line, index, "non-finite value");
  return value;
}

std::vector<double> parse_row(std::string_view text, std::size_t line, std::size_t expected) {
  const auto tokens = split_whitespace(text);
  if (tokens.size() != expected) {
    throw ParseError(line, ParseError::npos,
                     "expected " + std::to_string(expected) + " values, found " + std::to_string(tokens.size()));
  }
  std::vector<double> values(expected);
  for (std::size_t i = 0; i < expected; ++i) values[i] = parse_number(tokens[i], line, i);
  return values;
}

bool is_blank(std::string_view line) { return split_whitespace(line).empty(); }

std::ifstream open_for_reading(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PoseFormat parse_pose_format(std::string_view name) {
  if (name == "kitti") return PoseFormat::Kitti;
  if (name == "tum") return PoseFormat::Tum;
  throw Error(ErrorKind::InvalidArgument, "unknown pose format '" + std::string(name) + "'");
}

Trajectory rebase_to_first(const Trajectory& trajectory) {
  if (trajectory.poses.empty()) throw Error(ErrorKind::EmptyTrajectory, "trajectory has no poses");
  const RigidMotion origin_inv = invert(trajectory.poses.front());
  Trajectory out;
  out.timestamps = trajectory.timestamps;
  out.poses.reserve(trajectory.size());
  out.poses.push_back(RigidMotion::identity());
  for (std::size_t t = 1; t < trajectory.size(); ++t) out.poses.push_back(compose(origin_inv, trajectory.poses[t]));
  return out;
}

Trajectory read_kitti_poses(std::istream& in) {
  Trajectory raw;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    const std::vector<double> v = parse_row(text, line, 12);
    Mat3 r;
    r << v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10];
    RigidMotion pose;
    try {
      pose.rotation = matrix_to_quat(r);
    } catch (const Error& e) {
      std::string detail = e.what();
      detail.erase(0, detail.find(": ") + 2);
      throw Error(ErrorKind::NotARotation, detail, line);
    }
    pose.translation = Vec3(v[3], v[7], v[11]);
    raw.poses.push_back(pose);
  }
  if (raw.poses.empty()) throw Error(ErrorKind::EmptyTrajectory, "no poses in KITTI file");
  return rebase_to_first(raw);
}

Trajectory read_kitti_poses(const std::filesystem::path& path) {
  std::ifstream in = open_for_reading(path);
  return read_kitti_poses(in);
}

void write_kitti_poses(std::ostream& out, const Trajectory& trajectory) {
  for (const RigidMotion& p : trajectory.poses) {
    const Mat3 r = quat_to_matrix(p.rotation);
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) out << format_double(r(row, col)) << ' ';
      out << format_double(p.translation[row]) << (row == 2 ? '\n' : ' ');
    }
  }
}

void write_kitti_poses(const std::filesystem::path& path, const Trajectory& trajectory) {
  std::ofstream out = open_for_writing(path);
  write_kitti_poses(out, trajectory);
}

Trajectory read_tum_trajectory(std::istream& in) {
  Trajectory raw;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    const std::vector<double> v = parse_row(text, line, 8);
    const Vec4 wxyz(v[7], v[4], v[5], v[6]);
    const double norm = wxyz.norm();
    if (std::abs(norm - 1.0) > kQuaternionNormTolerance) {
      throw Error(ErrorKind::NotUnitQuaternion, "quaternion norm " + std::to_string(norm), line);
    }
    raw.timestamps.push_back(v[0]);
    raw.poses.push_back({UnitQuaternion(wxyz), Vec3(v[1], v[2], v[3])});
  }
  if (raw.poses.empty()) throw Error(ErrorKind::EmptyTrajectory, "no poses in TUM file");
  return rebase_to_first(raw);
}

Trajectory read_tum_trajectory(const std::filesystem::path& path) {
  std::ifstream in = open_for_reading(path);
  return read_tum_trajectory(in);
}

void write_tum_trajectory(std::ostream& out, const Trajectory& trajectory) {
  out << "# timestamp tx ty tz qx qy qz qw\n";
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    const RigidMotion& p = trajectory.poses[t];
    const double stamp = t < trajectory.timestamps.size() ? trajectory.timestamps[t] : static_cast<double>(t);
    out << format_double(stamp) << ' ' << format_double(p.translation.x()) << ' '
        << format_double(p.translation.y()) << ' ' << format_double(p.translation.z()) << ' '
        << format_double(p.rotation.x()) << ' ' << format_double(p.rotation.y()) << ' '
        << format_double(p.rotation.z()) << ' ' << format_double(p.rotation.w()) << '\n';
  }
}

void write_tum_trajectory(const std::filesystem::path& path, const Trajectory& trajectory) {
  std::ofstream out = open_for_writing(path);
  write_tum_trajectory(out, trajectory);
}

Trajectory read_trajectory(const std::filesystem::path& path, PoseFormat format) {
  return format == PoseFormat::Kitti ? read_kitti_poses(path) : read_tum_trajectory(path);
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& trajectory, PoseFormat format) {
  if (format == PoseFormat::Kitti) {
    write_kitti_poses(path, trajectory);
  } else {
    write_tum_trajectory(path, trajectory);
  }
}

void write_rig_ground_truth(const std::filesystem::path& path, const SimilarityTransform& rig) {
  const nlohmann::json j = {
      {"rotation", {{"w", rig.rotation.w()}, {"x", rig.rotation.x()}, {"y", rig.rotation.y()}, {"z", rig.rotation.z()}}},
      {"translation", {rig.translation.x(), rig.translation.y(), rig.translation.z()}},
      {"scale", rig.scale},
  };
  std::ofstream out = open_for_writing(path);
  out << j.dump(2) << '\n';
}

SimilarityTransform read_rig_ground_truth(const std::filesystem::path& path) {
  std::ifstream in = open_for_reading(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, ParseError::npos, std::string("invalid rig file: ") + e.what());
  }

  const auto number = [](const nlohmann::json& node, const std::string& name) -> double {
    if (!node.is_object() || !node.contains(name)) throw ParseError(0, ParseError::npos, "missing field '" + name + "'");
    const nlohmann::json& v = node.at(name);
    if (!v.is_number()) throw ParseError(0, ParseError::npos, "field '" + name + "' is not a number");
    return v.get<double>();
  };

  if (!j.is_object() || !j.contains("rotation")) throw ParseError(0, ParseError::npos, "missing field 'rotation'");
  const nlohmann::json& q = j.at("rotation");
  const Vec4 wxyz(number(q, "w"), number(q, "x"), number(q, "y"), number(q, "z"));
  if (std::abs(wxyz.norm() - 1.0) > kQuaternionNormTolerance) {
    throw ParseError(0, ParseError::npos, "field 'rotation' is not a unit quaternion");
  }

  if (!j.contains("translation")) throw ParseError(0, ParseError::npos, "missing field 'translation'");
  const nlohmann::json& t = j.at("translation");
  if (!t.is_array() || t.size() != 3 || !t[0].is_number() || !t[1].is_number() || !t[2].is_number()) {
    throw ParseError(0, ParseError::npos, "field 'translation' must be an array of 3 numbers");
  }

  SimilarityTransform rig;
  rig.rotation = UnitQuaternion(wxyz);
  rig.translation = Vec3(t[0].get<double>(), t[1].get<double>(), t[2].get<double>());
  rig.scale = number(j, "scale");
  if (!rig.is_valid()) throw ParseError(0, ParseError::npos, "field 'scale' must be positive");
  return rig;
}

}  // namespace rigcal
