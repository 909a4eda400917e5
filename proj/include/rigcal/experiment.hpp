#pragma once

#include "rigcal/online.hpp"
#include "rigcal/report.hpp"
#include "rigcal/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace rigcal {

struct NoiseLevel {
  double rot_std_deg = 0.0;
  double trans_std = 0.0;
};

/// Noise sweep over simulated rigs. Trial j uses the same rig and master
/// trajectory at every noise level; only the pose noise differs.
struct ExperimentConfig {
  SimConfig sim;
  std::vector<NoiseLevel> noise_levels{{0.1, 0.001}, {0.5, 0.005}, {1.0, 0.01}, {2.0, 0.02}};
  CalibratorConfig calibrator;
  std::size_t trials = 20;
  std::uint64_t master_seed = 1;
  bool perturb_relative = false;
};

/// Key/value file, one `key = value` per line, '#' comments. List values are
/// comma separated. Throws ParseError on unknown keys or bad values.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig read_experiment_config(const std::filesystem::path& path);

struct TrialResult {
  std::uint64_t rig_seed = 0;
  std::uint64_t trajectory_seed = 0;
  std::uint64_t noise_seed = 0;
  std::vector<FrameErrorRecord> records;
};

struct LevelResult {
  NoiseLevel noise;
  std::vector<TrialResult> trials;
  /// Per-frame median over trials of every metric.
  std::vector<FrameErrorRecord> median;
};

struct ExperimentReport {
  std::vector<LevelResult> levels;
};

/// Seeds derived from (master, trial, stream) through splitmix64.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream);

/// Runs one simulated trial through the online calibrator and scores every
/// frame against the true rig.
std::vector<FrameErrorRecord> run_trial(const SimConfig& sim, const NoiseLevel& noise,
                                        const CalibratorConfig& calibrator, std::uint64_t rig_seed,
                                        std::uint64_t noise_seed, bool perturb_relative = false);

ExperimentReport run_experiment(const ExperimentConfig& config);

std::vector<FrameErrorRecord> median_records(const std::vector<TrialResult>& trials);

/// Per-trial error CSVs, a combined CSV, per-level median CSVs and one SVG per
/// metric with a curve per noise level.
void write_experiment_outputs(const ExperimentReport& report, const std::filesystem::path& out_dir);

}  // namespace rigcal
