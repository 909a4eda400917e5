#include "rigcal/experiment.hpp"

#include "rigcal/error.hpp"
#include "rigcal/handeye.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>

namespace rigcal {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& value, std::size_t line) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || end != value.data() + value.size()) {
    throw ParseError(line, ParseError::npos, "not a number: '" + value + "'");
  }
  return v;
}

std::uint64_t to_unsigned(const std::string& value, std::size_t line) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || end != value.data() + value.size()) {
    throw ParseError(line, ParseError::npos, "not a nonnegative integer: '" + value + "'");
  }
  return v;
}

bool to_bool(const std::string& value, std::size_t line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParseError(line, ParseError::npos, "not a boolean: '" + value + "'");
}

std::vector<double> to_list(const std::string& value, std::size_t line) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), line));
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::string level_name(std::size_t i) { return "level" + std::to_string(i); }

std::string level_label(const NoiseLevel& n) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%g deg / %g", n.rot_std_deg, n.trans_std);
  return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig config;
  std::vector<double> rot_levels;
  std::vector<double> trans_levels;
  std::size_t rot_line = 0;

  using Setter = std::function<void(const std::string&, std::size_t)>;
  const std::map<std::string, Setter> setters = {
      {"master_seed", [&](const std::string& v, std::size_t l) { config.master_seed = to_unsigned(v, l); }},
      {"trials", [&](const std::string& v, std::size_t l) { config.trials = to_unsigned(v, l); }},
      {"frames", [&](const std::string& v, std::size_t l) { config.sim.frames = to_unsigned(v, l); }},
      {"damping", [&](const std::string& v, std::size_t l) { config.sim.damping = to_double(v, l); }},
      {"process_noise_rot_deg",
       [&](const std::string& v, std::size_t l) { config.sim.process_noise_rot_deg = to_double(v, l); }},
      {"process_noise_trans",
       [&](const std::string& v, std::size_t l) { config.sim.process_noise_trans = to_double(v, l); }},
      {"rot_noise_deg",
       [&](const std::string& v, std::size_t l) {
         rot_levels = to_list(v, l);
         rot_line = l;
       }},
      {"trans_noise", [&](const std::string& v, std::size_t l) { trans_levels = to_list(v, l); }},
      {"forgetting", [&](const std::string& v, std::size_t l) { config.calibrator.forgetting = to_double(v, l); }},
      {"warmup", [&](const std::string& v, std::size_t l) { config.calibrator.warmup_frames = to_unsigned(v, l); }},
      {"c0_scale", [&](const std::string& v, std::size_t l) { config.calibrator.c0_scale = to_double(v, l); }},
      {"conditioning_threshold",
       [&](const std::string& v, std::size_t l) { config.calibrator.conditioning_threshold = to_double(v, l); }},
      {"use_relative_constraints",
       [&](const std::string& v, std::size_t l) { config.calibrator.use_relative_constraints = to_bool(v, l); }},
      {"buffer_warmup",
       [&](const std::string& v, std::size_t l) { config.calibrator.buffer_warmup = to_bool(v, l); }},
      {"perturb_relative", [&](const std::string& v, std::size_t l) { config.perturb_relative = to_bool(v, l); }},
  };

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const std::string stripped = trim(text.substr(0, text.find('#')));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ParseError(line, ParseError::npos, "expected 'key = value'");
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ParseError(line, ParseError::npos, "unknown key '" + key + "'");
    it->second(value, line);
  }

  if (!rot_levels.empty() || !trans_levels.empty()) {
    if (rot_levels.size() != trans_levels.size()) {
      throw ParseError(rot_line, ParseError::npos, "rot_noise_deg and trans_noise must have equal length");
    }
    config.noise_levels.clear();
    for (std::size_t i = 0; i < rot_levels.size(); ++i) config.noise_levels.push_back({rot_levels[i], trans_levels[i]});
  }
  if (config.trials == 0) throw ParseError(0, ParseError::npos, "trials must be positive");
  config.sim.validate();
  config.calibrator.validate();
  return config;
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return parse_experiment_config(in);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream) {
  const auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ trial) ^ stream);
}

std::vector<FrameErrorRecord> run_trial(const SimConfig& sim, const NoiseLevel& noise,
                                        const CalibratorConfig& calibrator, std::uint64_t rig_seed,
                                        std::uint64_t noise_seed, bool perturb_relative) {
  const SimulatedRig data = simulate_rig(sim, rig_seed, {noise.rot_std_deg, noise.trans_std, noise_seed, perturb_relative});
  const std::vector<RigidMotion> m0 = relative_motions(data.camera0);
  const std::vector<RigidMotion> m1 = relative_motions(data.camera1);

  OnlineCalibrator calib(calibrator);
  std::vector<FrameErrorRecord> records;
  records.reserve(m0.size());
  for (std::size_t t = 0; t < m0.size(); ++t) records.push_back(compute_frame_errors(calib.step(m0[t], m1[t]), data.rig));
  return records;
}

std::vector<FrameErrorRecord> median_records(const std::vector<TrialResult>& trials) {
  std::vector<FrameErrorRecord> out;
  if (trials.empty()) return out;
  const std::size_t frames = trials.front().records.size();
  out.reserve(frames);
  std::vector<double> buf(trials.size());
  const auto column = [&](std::size_t f, double FrameErrorRecord::*field) {
    for (std::size_t j = 0; j < trials.size(); ++j) buf[j] = trials[j].records[f].*field;
    return median(buf);
  };
  for (std::size_t f = 0; f < frames; ++f) {
    FrameErrorRecord r;
    r.frame = trials.front().records[f].frame;
    r.rot_geodesic_deg = column(f, &FrameErrorRecord::rot_geodesic_deg);
    r.rot_axis_angle_deg = column(f, &FrameErrorRecord::rot_axis_angle_deg);
    r.trans_direction_deg = column(f, &FrameErrorRecord::trans_direction_deg);
    r.trans_norm_err = column(f, &FrameErrorRecord::trans_norm_err);
    r.scale_rel_err = column(f, &FrameErrorRecord::scale_rel_err);
    r.conditioning = column(f, &FrameErrorRecord::conditioning);
    r.translation_active = std::all_of(trials.begin(), trials.end(),
                                       [f](const TrialResult& t) { return t.records[f].translation_active; });
    out.push_back(r);
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.sim.validate();
  config.calibrator.validate();
  ExperimentReport report;
  for (std::size_t level = 0; level < config.noise_levels.size(); ++level) {
    LevelResult result;
    result.noise = config.noise_levels[level];
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      TrialResult tr;
      tr.rig_seed = derive_seed(config.master_seed, trial, 0);
      tr.trajectory_seed = derive_seed(config.master_seed, trial, 1);
      tr.noise_seed = derive_seed(config.master_seed, trial, 2 + level);
      SimConfig sim = config.sim;
      sim.seed = tr.trajectory_seed;
      tr.records = run_trial(sim, result.noise, config.calibrator, tr.rig_seed, tr.noise_seed, config.perturb_relative);
      result.trials.push_back(std::move(tr));
    }
    result.median = median_records(result.trials);
    report.levels.push_back(std::move(result));
  }
  return report;
}

void write_experiment_outputs(const ExperimentReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  std::ofstream all(out_dir / "all_frames.csv");
  if (!all) throw Error(ErrorKind::IoError, "cannot write " + (out_dir / "all_frames.csv").string());
  all << "level,trial," << kErrorCsvHeader << '\n';

  for (std::size_t level = 0; level < report.levels.size(); ++level) {
    const LevelResult& lr = report.levels[level];
    const std::filesystem::path dir = out_dir / level_name(level);
    std::filesystem::create_directories(dir);
    for (std::size_t trial = 0; trial < lr.trials.size(); ++trial) {
      const auto& records = lr.trials[trial].records;
      write_error_csv(dir / ("trial" + std::to_string(trial) + ".csv"), records);
      for (const FrameErrorRecord& r : records) {
        all << level << ',' << trial << ',' << r.frame << ',' << format_number(r.rot_geodesic_deg) << ','
            << format_number(r.rot_axis_angle_deg) << ',' << format_number(r.trans_direction_deg) << ','
            << format_number(r.trans_norm_err) << ',' << format_number(r.scale_rel_err) << ','
            << format_number(r.conditioning) << ',' << (r.translation_active ? 1 : 0) << '\n';
      }
    }
    write_error_csv(out_dir / ("median_" + level_name(level) + ".csv"), lr.median);
  }

  struct Metric {
    const char* name;
    const char* label;
    double FrameErrorRecord::*field;
  };
  const Metric metrics[] = {
      {"rot_geodesic_deg", "rotation error (deg)", &FrameErrorRecord::rot_geodesic_deg},
      {"rot_axis_angle_deg", "rotation axis error (deg)", &FrameErrorRecord::rot_axis_angle_deg},
      {"trans_direction_deg", "translation direction error (deg)", &FrameErrorRecord::trans_direction_deg},
      {"trans_norm_err", "translation error (baseline units)", &FrameErrorRecord::trans_norm_err},
      {"scale_rel_err", "relative scale error", &FrameErrorRecord::scale_rel_err},
  };
  for (const Metric& m : metrics) {
    std::vector<PlotCurve> curves;
    for (const LevelResult& lr : report.levels) {
      PlotCurve c;
      c.label = level_label(lr.noise);
      for (const FrameErrorRecord& r : lr.median) {
        c.x.push_back(static_cast<double>(r.frame));
        c.y.push_back(r.*(m.field));
      }
      curves.push_back(std::move(c));
    }
    PlotOptions opts;
    opts.title = std::string("median ") + m.label;
    opts.y_label = m.label;
    write_svg(out_dir / (std::string(m.name) + ".svg"), curves, opts);
  }
}

}  // namespace rigcal
