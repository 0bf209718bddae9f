#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sparsedyn/cqgle.hpp"

namespace sparsedyn {

struct RegimeSpec {
  int id = 0;
  CqgleParams params;
  std::string description;
};

/// Everything needed to reproduce the experiments: regimes, grid,
/// integration and snapshot settings, sensors, noise, Monte-Carlo
/// parameters, and the switching schedule.
struct ExperimentConfig {
  std::vector<RegimeSpec> regimes;

  int n = 1024;
  double x_min = -20.0;
  double x_max = 20.0;

  double dt = 0.01;
  double ic_amplitude = 1.0;
  double ic_width = 1.0;
  // The experiment seed is sech-shaped but deliberately generic: a small
  // odd skew keeps it out of the invariant symmetric subspace (a perfectly
  // even profile delays the symmetry breaking of the chaotic regime past
  // the snapshot window), an optional phase tilt is exposed, and the offset
  // places the attractors relative to the fixed sensor positions.
  double ic_skew = -0.1;
  double ic_chirp = 0.0;
  double ic_offset = 2.0;
  double snapshot_start = 40.0;
  double snapshot_end = 80.0;
  double snapshot_stride = 1.0;

  double energy_threshold = 0.99;

  std::vector<double> sensors3 = {0.0, 0.7, 1.4};
  std::vector<double> sensors5 = {0.0, 0.7, 1.4, 1.8, 2.2};

  double sigma = 0.2;
  int trials = 400;
  std::uint64_t seed = 1729;
  int aggregate_window = 0;  // majority vote over this many unit-spaced samples

  // Switching schedule: (regime id, start time) pairs plus measurement times.
  std::vector<std::pair<int, double>> schedule;  // regime id @ t_start
  double schedule_t_end = 300.0;
  std::vector<double> measurement_times = {25.0, 125.0, 225.0};

  GridSpec make_grid() const;
  const RegimeSpec& regime(int id) const;
  BetaSchedule make_schedule() const;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;

  bool operator==(const ExperimentConfig&) const;
};

/// The six bundled CQGLE regimes with the default pipeline settings.
ExperimentConfig default_config();

/// Parse a key-value config file ([section] headers, key = value lines,
/// '#' comments).  Throws ConfigError with a line reference on bad input,
/// IoError if unreadable.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Write a config in the same format load_config reads.
void save_config(const ExperimentConfig& config,
                 const std::filesystem::path& path);

/// Flat view of a sectioned key-value file: entries appear as
/// "section.key" (bare "key" before the first section header).
std::map<std::string, std::string> read_key_values(
    const std::filesystem::path& path);

}  // namespace sparsedyn
