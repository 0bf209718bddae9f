#pragma once

#include <filesystem>
#include <vector>

#include "sparsedyn/classify.hpp"
#include "sparsedyn/config.hpp"
#include "sparsedyn/library.hpp"
#include "sparsedyn/pde_sim.hpp"
#include "sparsedyn/rom.hpp"
#include "sparsedyn/sensing.hpp"
#include "sparsedyn/sparse.hpp"

namespace sparsedyn {

/// Generic localized seed used by every experiment, with s = (x - offset)/width:
/// amplitude * (1 + skew*tanh(s)) * sech(s) * exp(i*chirp*s).
FieldState localized_seed(const GridSpec& grid, double amplitude, double width,
                          double skew, double chirp, double offset = 0.0);

/// Simulate every configured regime from the standard localized initial
/// condition, extract its POD basis over the snapshot window, and
/// concatenate the blocks into the overcomplete library.
ModalLibrary build_all(const ExperimentConfig& config);

/// Human-readable sidecar describing how a library file was produced:
/// grid bounds, snapshot window, energy threshold, and per-regime
/// parameters and ranks.  Conventionally stored at <library path>.manifest.
void write_manifest(const ExperimentConfig& config, const ModalLibrary& lib,
                    const std::filesystem::path& path);

/// Recover the grid a persisted library was built on.
GridSpec grid_from_manifest(const std::filesystem::path& path);

/// Run one solver on a compressed measurement with the default settings:
/// l1 uses penalty continuation, omp selects up to m atoms, ls is the
/// pseudo-inverse baseline.
SparseSolution run_solver(SolverId solver, const Eigen::MatrixXcd& G,
                          const Eigen::VectorXcd& y);

struct SwitchingRow {
  int segment = 0;  // 1-based position in the schedule
  double measurement_time = 0.0;
  int true_regime = 0;
  int predicted_regime = 0;
  double margin = 0.0;
  double recon_rel_l2 = 0.0;  // +inf when the reduced model blew up
};

struct SwitchingReport {
  SensorSet sensors;
  std::vector<SwitchingRow> rows;
  std::vector<Measurement> measurements;   // one per measurement time
  std::vector<SparseSolution> solutions;   // coefficient vectors per time
};

/// The regime-switching experiment: simulate the schedule once, then at
/// each measurement time measure -> solve -> classify -> project -> evolve
/// the Galerkin model to the end of the segment, scoring the reconstruction
/// against the full simulation over the segment's final 50 time units.
SwitchingReport run_switching_experiment(const ExperimentConfig& config,
                                         const ModalLibrary& lib,
                                         SolverId solver = SolverId::l1,
                                         int sensor_count = 3);

struct TrialStats {
  std::vector<double> times;       // measurement times
  std::vector<int> true_regimes;   // active regime per time
  std::vector<int> regime_ids;     // row labels, config order
  Eigen::MatrixXi counts;          // regime_ids.size() x times.size()
  int trials = 0;
  int no_convergence = 0;          // flagged l1 solutions across all solves

  /// Percent of trials that predicted the active regime at this time.
  double accuracy(int time_index) const;
};

/// Monte-Carlo classification study: fresh noise for every trial and every
/// measurement time (trial i derives its seeds from base seed + i).  With
/// config.aggregate_window = w > 1, each decision is a majority vote over w
/// consecutive snapshots.
TrialStats run_monte_carlo(const ExperimentConfig& config,
                           const ModalLibrary& lib,
                           SolverId solver = SolverId::l1,
                           int sensor_count = 3);

// CSV emission.  Every writer formats numbers deterministically, so
// re-emitting identical inputs reproduces files byte for byte.
void write_accuracy_csv(const TrialStats& stats,
                        const std::filesystem::path& path);
void write_switching_csv(const SwitchingReport& report,
                         const std::filesystem::path& path);
void write_coefficients_csv(const SwitchingReport& report,
                            const ModalLibrary& lib,
                            const std::filesystem::path& path);
void write_measurements_csv(const SwitchingReport& report,
                            const std::filesystem::path& path);
void write_snapshots_csv(const SnapshotMatrix& snaps, const GridSpec& grid,
                         const std::filesystem::path& path);

struct MeasurementGroup {
  double time = 0.0;
  std::vector<double> positions;
  Eigen::VectorXcd values;
};

/// Parse a measurement CSV (sensor_x,real,imag,time), grouping rows by
/// time in order of first appearance.
std::vector<MeasurementGroup> read_measurements_csv(
    const std::filesystem::path& path);

}  // namespace sparsedyn
