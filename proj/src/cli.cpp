#include "rigcal/cli.hpp"

#include "rigcal/batch.hpp"
#include "rigcal/error.hpp"
#include "rigcal/experiment.hpp"
#include "rigcal/handeye.hpp"
#include "rigcal/online.hpp"
#include "rigcal/pose_io.hpp"
#include "rigcal/report.hpp"
#include "rigcal/simulator.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>

namespace rigcal {

namespace {

namespace fs = std::filesystem;

struct SimulateArgs {
  std::string out_dir;
  std::uint64_t seed = 1;
  SimConfig sim;
  double rot_noise = 0.0;
  double trans_noise = 0.0;
  bool perturb_relative = false;
  std::string format = "kitti";
};

struct PairArgs {
  std::string cam0;
  std::string cam1;
  std::string format = "kitti";
};

struct CalibrateArgs {
  PairArgs pair;
  CalibratorConfig config;
  std::string out = "-";
};

struct ReportArgs {
  std::string estimates;
  std::string rig;
  std::string out_csv = "-";
  std::string svg;
};

struct ExperimentArgs {
  std::string config;
  std::string out_dir;
};

const char* extension(PoseFormat f) { return f == PoseFormat::Kitti ? ".txt" : ".tum"; }

std::pair<Trajectory, Trajectory> load_pair(const PairArgs& args) {
  const PoseFormat format = parse_pose_format(args.format);
  Trajectory t0 = read_trajectory(args.cam0, format);
  Trajectory t1 = read_trajectory(args.cam1, format);
  if (t0.size() != t1.size()) {
    throw Error(ErrorKind::LengthMismatch, args.cam0 + " has " + std::to_string(t0.size()) + " poses, " + args.cam1 +
                                               " has " + std::to_string(t1.size()));
  }
  return {std::move(t0), std::move(t1)};
}

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  const PoseFormat format = parse_pose_format(a.format);
  SimConfig sim = a.sim;
  sim.seed = derive_seed(a.seed, 0, 1);
  const NoiseModel noise{a.rot_noise, a.trans_noise, derive_seed(a.seed, 0, 2), a.perturb_relative};
  const SimulatedRig data = simulate_rig(sim, derive_seed(a.seed, 0, 0), noise);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const fs::path p0 = dir / (std::string("cam0") + extension(format));
  const fs::path p1 = dir / (std::string("cam1") + extension(format));
  write_trajectory(p0, data.camera0, format);
  write_trajectory(p1, data.camera1, format);
  write_rig_ground_truth(dir / "rig.json", data.rig);
  out << p0.string() << '\n' << p1.string() << '\n' << (dir / "rig.json").string() << '\n';
  return 0;
}

int run_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
  const auto [t0, t1] = load_pair(a.pair);
  const std::vector<RigidMotion> m0 = relative_motions(t0);
  const std::vector<RigidMotion> m1 = relative_motions(t1);
  if (m0.empty()) throw Error(ErrorKind::NoData, "trajectories contain a single pose");

  OnlineCalibrator calib(a.config);
  std::vector<CalibrationEstimate> estimates;
  estimates.reserve(m0.size());
  for (std::size_t t = 0; t < m0.size(); ++t) estimates.push_back(calib.step(m0[t], m1[t]));

  if (a.out == "-") {
    write_estimates_csv(out, estimates);
  } else {
    write_estimates_csv(fs::path(a.out), estimates);
  }
  const CalibrationEstimate& last = calib.finalize();
  if (last.rotation_ill_conditioned) {
    err << "warning: rotation is ill-conditioned (sigma3/sigma4 = " << format_number(last.rotation_conditioning)
        << ")\n";
  }
  if (!last.translation_active) err << "warning: translation never activated (warm-up longer than the sequence)\n";
  return 0;
}

int run_batch(const PairArgs& a, std::ostream& out, std::ostream& err) {
  const auto [t0, t1] = load_pair(a);
  const BatchCalibration result = calibrate_batch(t0, t1);
  const SimilarityTransform& s = result.transform;
  out << "rotation_wxyz=" << format_number(s.rotation.w()) << ',' << format_number(s.rotation.x()) << ','
      << format_number(s.rotation.y()) << ',' << format_number(s.rotation.z())
      << " translation=" << format_number(s.translation.x()) << ',' << format_number(s.translation.y()) << ','
      << format_number(s.translation.z()) << " scale=" << format_number(s.scale)
      << " ill_conditioned=" << (result.rotation.ill_conditioned ? 1 : 0) << '\n';
  if (result.rotation.ill_conditioned) err << "warning: rotation is ill-conditioned\n";
  return 0;
}

int run_report(const ReportArgs& a, std::ostream& out) {
  const std::vector<CalibrationEstimate> estimates = read_estimates_csv(fs::path(a.estimates));
  const SimilarityTransform rig = read_rig_ground_truth(a.rig);
  std::vector<FrameErrorRecord> records;
  records.reserve(estimates.size());
  for (const CalibrationEstimate& e : estimates) records.push_back(compute_frame_errors(e, rig));
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].frame <= records[i - 1].frame) {
      throw ParseError(i + 2, 0, "frame numbers must be strictly increasing");
    }
  }

  if (a.out_csv == "-") {
    write_error_csv(out, records);
  } else {
    write_error_csv(fs::path(a.out_csv), records);
  }
  if (!a.svg.empty()) {
    PlotCurve rot{"rotation (deg)", {}, {}};
    PlotCurve trans{"translation direction (deg)", {}, {}};
    for (const FrameErrorRecord& r : records) {
      rot.x.push_back(static_cast<double>(r.frame));
      rot.y.push_back(r.rot_geodesic_deg);
      if (r.translation_active) {
        trans.x.push_back(static_cast<double>(r.frame));
        trans.y.push_back(r.trans_direction_deg);
      }
    }
    PlotOptions opts;
    opts.title = "calibration error";
    opts.y_label = "error (deg)";
    write_svg(fs::path(a.svg), {rot, trans}, opts);
  }
  return 0;
}

int run_experiment_cmd(const ExperimentArgs& a, std::ostream& out) {
  const ExperimentConfig config = read_experiment_config(a.config);
  const ExperimentReport report = run_experiment(config);
  write_experiment_outputs(report, a.out_dir);
  out << "level,rot_std_deg,trans_std,final_rot_geodesic_deg,final_trans_direction_deg,final_trans_norm_err,"
         "final_scale_rel_err\n";
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const LevelResult& lr = report.levels[i];
    const FrameErrorRecord& f = lr.median.back();
    out << i << ',' << format_number(lr.noise.rot_std_deg) << ',' << format_number(lr.noise.trans_std) << ','
        << format_number(f.rot_geodesic_deg) << ',' << format_number(f.trans_direction_deg) << ','
        << format_number(f.trans_norm_err) << ',' << format_number(f.scale_rel_err) << '\n';
  }
  return 0;
}

void add_pair_options(CLI::App* cmd, PairArgs& pair) {
  cmd->add_option("--cam0", pair.cam0, "pose file of camera 0 (master)")->required();
  cmd->add_option("--cam1", pair.cam1, "pose file of camera 1 (slave)")->required();
  cmd->add_option("--format", pair.format, "pose file format")->check(CLI::IsMember({"kitti", "tum"}));
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online calibration of rigidly mounted, non-overlapping cameras from their ego-motion", "rigcal"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "simulate a rig and write two pose files plus rig.json");
  simulate->add_option("--out-dir", sim_args.out_dir, "output directory")->required();
  simulate->add_option("--seed", sim_args.seed, "master seed");
  simulate->add_option("--frames", sim_args.sim.frames, "frames after frame 0")->check(CLI::Range(2, 1 << 24));
  simulate->add_option("--damping", sim_args.sim.damping, "twist damping in (0, 1]");
  simulate->add_option("--process-noise-rot", sim_args.sim.process_noise_rot_deg, "twist excitation (deg)");
  simulate->add_option("--process-noise-trans", sim_args.sim.process_noise_trans, "twist excitation (units)");
  simulate->add_option("--rot-noise", sim_args.rot_noise, "pose rotation noise std (deg)");
  simulate->add_option("--trans-noise", sim_args.trans_noise, "pose translation noise std (units)");
  simulate->add_flag("--perturb-relative", sim_args.perturb_relative, "perturb frame-to-frame motions instead");
  simulate->add_option("--format", sim_args.format, "pose file format")->check(CLI::IsMember({"kitti", "tum"}));

  CalibrateArgs cal_args;
  CLI::App* calibrate = app.add_subcommand("calibrate", "run the online calibrator, one CSV row per frame");
  add_pair_options(calibrate, cal_args.pair);
  calibrate->add_option("--forgetting", cal_args.config.forgetting, "RLS forgetting factor in (0, 1]");
  calibrate->add_option("--warmup", cal_args.config.warmup_frames, "first frame of translation estimation");
  calibrate->add_option("--c0-scale", cal_args.config.c0_scale, "initial RLS covariance scale");
  calibrate->add_option("--conditioning-threshold", cal_args.config.conditioning_threshold,
                        "sigma3/sigma4 below this is reported as ill-conditioned");
  calibrate->add_flag("--use-relative-constraints", cal_args.config.use_relative_constraints,
                      "constrain with frame-to-frame motions instead of poses relative to frame 0");
  calibrate->add_flag("--buffer-warmup", cal_args.config.buffer_warmup, "replay warm-up frames once translation starts");
  calibrate->add_option("--out", cal_args.out, "estimates CSV ('-' for standard output)");

  PairArgs batch_args;
  CLI::App* batch = app.add_subcommand("batch", "batch calibration over all frames, one result line");
  add_pair_options(batch, batch_args);

  ReportArgs rep_args;
  CLI::App* report = app.add_subcommand("report", "score an estimates CSV against rig.json");
  report->add_option("--estimates", rep_args.estimates, "estimates CSV from 'calibrate'")->required();
  report->add_option("--rig", rep_args.rig, "rig ground truth JSON")->required();
  report->add_option("--out", rep_args.out_csv, "error CSV ('-' for standard output)");
  report->add_option("--svg", rep_args.svg, "error plot");

  ExperimentArgs exp_args;
  CLI::App* experiment = app.add_subcommand("experiment", "noise sweep over simulated rigs from a config file");
  experiment->add_option("--config", exp_args.config, "key = value experiment file")->required();
  experiment->add_option("--out-dir", exp_args.out_dir, "output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  try {
    if (*simulate) return run_simulate(sim_args, out);
    if (*calibrate) return run_calibrate(cal_args, out, err);
    if (*batch) return run_batch(batch_args, out, err);
    if (*report) return run_report(rep_args, out);
    if (*experiment) return run_experiment_cmd(exp_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::InvalidForgetting ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace rigcal
