#include "sparsedyn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "sparsedyn/errors.hpp"

namespace sparsedyn {

namespace {

// Stable text form for CSV payloads; %.12g keeps round-trip noise out of
// the diffs while staying human-readable.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Relative L2 distance between complex fields up to a global phase: the
// CQGLE is U(1)-invariant and a truncated Galerkin model reproduces the
// rotation frequency only approximately, so the raw complex difference
// would be dominated by an accumulated phase that no |U| comparison sees.
double phase_aligned_rel_l2(const Eigen::VectorXcd& test,
                            const Eigen::VectorXcd& reference) {
  const double ref_sq = reference.squaredNorm();
  if (ref_sq == 0.0) return test.norm() == 0.0 ? 0.0 : 1.0;
  const double aligned_sq = test.squaredNorm() + ref_sq -
                            2.0 * std::abs(reference.dot(test));
  return std::sqrt(std::max(aligned_sq, 0.0) / ref_sq);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a combined word; decorrelates trial/time/
  // window indices that differ by small increments.
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<double> window_times(double start, double end, double stride) {
  std::vector<double> times;
  const long count = std::lround((end - start) / stride);
  for (long i = 0; i <= count; ++i) times.push_back(start + i * stride);
  return times;
}

long snapshot_column(double t, double stride, long n_cols,
                     const char* what) {
  const long col = std::lround(t / stride);
  if (col < 0 || col >= n_cols || std::abs(col * stride - t) > 1e-9)
    throw ConfigError(std::string(what) +
                      " does not land on the snapshot grid: t = " + fmt(t));
  return col;
}

const std::vector<double>& sensor_positions(const ExperimentConfig& config,
                                            int sensor_count) {
  if (sensor_count == 3) return config.sensors3;
  if (sensor_count == 5) return config.sensors5;
  throw ConfigError("sensor_count must be 3 or 5");
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << body;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

FieldState localized_seed(const GridSpec& grid, double amplitude, double width,
                          double skew, double chirp, double offset) {
  FieldState state{grid, Eigen::VectorXcd(grid.n()), 0.0};
  for (int i = 0; i < grid.n(); ++i) {
    const double x = (grid.nodes()[i] - offset) / width;
    state.values[i] = amplitude * (1.0 + skew * std::tanh(x)) / std::cosh(x) *
                      std::polar(1.0, chirp * x);
  }
  return state;
}

namespace {

FieldState config_seed(const ExperimentConfig& config, const GridSpec& grid) {
  return localized_seed(grid, config.ic_amplitude, config.ic_width,
                        config.ic_skew, config.ic_chirp, config.ic_offset);
}

}  // namespace

ModalLibrary build_all(const ExperimentConfig& config) {
  config.validate();
  const GridSpec grid = config.make_grid();
  const std::vector<double> snap_times = window_times(
      config.snapshot_start, config.snapshot_end, config.snapshot_stride);

  std::vector<PodBasis> bases;
  bases.reserve(config.regimes.size());
  for (const auto& regime : config.regimes) {
    SimulationResult run = simulate(regime.params, config_seed(config, grid),
                                    config.snapshot_end, config.dt, snap_times,
                                    regime.id);
    bases.push_back(pod_basis(run.snapshots, config.energy_threshold));
  }
  return build_library(std::move(bases));
}

void write_manifest(const ExperimentConfig& config, const ModalLibrary& lib,
                    const std::filesystem::path& path) {
  std::ostringstream out;
  out << "# modal library manifest\n";
  out << "[library]\n"
      << "n = " << lib.n() << "\n"
      << "p = " << lib.p() << "\n"
      << "block_count = " << lib.block_count() << "\n";
  out << "[grid]\n"
      << "n = " << config.n << "\n"
      << "x_min = " << fmt(config.x_min) << "\n"
      << "x_max = " << fmt(config.x_max) << "\n";
  out << "[simulation]\n"
      << "dt = " << fmt(config.dt) << "\n"
      << "ic_amplitude = " << fmt(config.ic_amplitude) << "\n"
      << "ic_width = " << fmt(config.ic_width) << "\n"
      << "ic_skew = " << fmt(config.ic_skew) << "\n"
      << "ic_chirp = " << fmt(config.ic_chirp) << "\n"
      << "ic_offset = " << fmt(config.ic_offset) << "\n"
      << "snapshot_start = " << fmt(config.snapshot_start) << "\n"
      << "snapshot_end = " << fmt(config.snapshot_end) << "\n"
      << "snapshot_stride = " << fmt(config.snapshot_stride) << "\n";
  out << "[pod]\n"
      << "energy_threshold = " << fmt(config.energy_threshold) << "\n";
  for (const auto& block : lib.blocks()) {
    const RegimeSpec& regime = config.regime(block.regime_id);
    out << "[regime " << regime.id << "]\n"
        << "tau = " << fmt(regime.params.tau) << "\n"
        << "kappa = " << fmt(regime.params.kappa) << "\n"
        << "mu = " << fmt(regime.params.mu) << "\n"
        << "nu = " << fmt(regime.params.nu) << "\n"
        << "eps = " << fmt(regime.params.eps) << "\n"
        << "gamma = " << fmt(regime.params.gamma) << "\n"
        << "rank = " << block.rank() << "\n";
    if (!regime.description.empty())
      out << "description = " << regime.description << "\n";
  }
  write_text(path, out.str());
}

GridSpec grid_from_manifest(const std::filesystem::path& path) {
  const auto entries = read_key_values(path);
  const auto need = [&](const char* key) -> double {
    auto it = entries.find(key);
    if (it == entries.end())
      throw FormatError("manifest " + path.string() + " lacks " + key);
    try {
      return std::stod(it->second);
    } catch (const std::exception&) {
      throw FormatError("manifest " + path.string() + ": bad value for " +
                        std::string(key));
    }
  };
  return GridSpec(static_cast<int>(need("grid.n")), need("grid.x_min"),
                  need("grid.x_max"));
}

SparseSolution run_solver(SolverId solver, const Eigen::MatrixXcd& G,
                          const Eigen::VectorXcd& y) {
  switch (solver) {
    case SolverId::l1:
      return solve_l1_continuation(G, y);
    case SolverId::omp:
      return solve_omp(G, y,
                       static_cast<int>(std::min(G.rows(), G.cols())),
                       1e-8 * std::max(1.0, y.norm()));
    case SolverId::least_squares:
      return solve_least_squares(G, y);
  }
  throw std::invalid_argument("run_solver: unknown solver");
}

namespace {

struct ScheduleContext {
  GridSpec grid;
  SensorSet sensors;
  Eigen::MatrixXcd dictionary;
  BetaSchedule schedule;
  ScheduleResult full;  // snapshots at the configured stride over [0, t_end]
};

ScheduleContext prepare_schedule(const ExperimentConfig& config,
                                 int sensor_count) {
  config.validate();
  GridSpec grid = config.make_grid();
  SensorSet sensors =
      place_sensors(grid, sensor_positions(config, sensor_count));
  BetaSchedule schedule = config.make_schedule();
  ScheduleResult full =
      simulate_schedule(schedule, config_seed(config, grid),
                        config.schedule_t_end, config.dt,
                        config.snapshot_stride);
  return ScheduleContext{std::move(grid), std::move(sensors),
                         Eigen::MatrixXcd{}, std::move(schedule),
                         std::move(full)};
}

FieldState field_at(const ScheduleContext& ctx, double t,
                    double stride) {
  const long col = snapshot_column(t, stride, ctx.full.snapshots.q(),
                                   "measurement time");
  return FieldState{ctx.grid, ctx.full.snapshots.data.col(col), t};
}

}  // namespace

SwitchingReport run_switching_experiment(const ExperimentConfig& config,
                                         const ModalLibrary& lib,
                                         SolverId solver, int sensor_count) {
  ScheduleContext ctx = prepare_schedule(config, sensor_count);
  ctx.dictionary = compressed_dictionary(lib, ctx.sensors);

  SwitchingReport report;
  report.sensors = ctx.sensors;

  for (std::size_t ti = 0; ti < config.measurement_times.size(); ++ti) {
    const double t = config.measurement_times[ti];
    const int seg_index = ctx.schedule.segment_at(t);
    const auto& segment = ctx.schedule.segments[seg_index];
    const double seg_end =
        (seg_index + 1 < static_cast<int>(ctx.schedule.segments.size()))
            ? ctx.schedule.segments[seg_index + 1].t_start
            : config.schedule_t_end;

    const FieldState field = field_at(ctx, t, config.snapshot_stride);
    const Measurement meas =
        measure(field, ctx.sensors, config.sigma,
                mix_seed(config.seed, static_cast<std::uint64_t>(ti)));
    const SparseSolution sol = run_solver(solver, ctx.dictionary, meas.values);
    const Classification cls = classify(lib, sol);

    SwitchingRow row;
    row.segment = seg_index + 1;
    row.measurement_time = t;
    row.true_regime = segment.regime_id;
    row.predicted_regime = cls.regime_id;
    row.margin = cls.margin;

    // Galerkin reconstruction with the predicted regime's block and
    // parameters, scored over the segment's final 50 time units.
    const BlockProjection projection =
        project_onto_block(lib, ctx.sensors, meas, cls.regime_id);
    const GalerkinModel model =
        build_galerkin(lib, cls.regime_id,
                       config.regime(cls.regime_id).params, ctx.grid);
    row.recon_rel_l2 = std::numeric_limits<double>::infinity();
    try {
      const CoefficientTrajectory traj =
          integrate_rom(model, projection.amplitudes, t, seg_end, config.dt,
                        config.snapshot_stride);
      const double score_start = std::max(seg_end - 50.0, t);
      double err_sum = 0.0;
      int err_count = 0;
      for (std::size_t s = 0; s < traj.times.size(); ++s) {
        if (traj.times[s] < score_start - 1e-9) continue;
        const long col = snapshot_column(traj.times[s], config.snapshot_stride,
                                         ctx.full.snapshots.q(), "score time");
        const Eigen::VectorXcd rom_field = model.modes * traj.amplitudes[s];
        err_sum +=
            phase_aligned_rel_l2(rom_field, ctx.full.snapshots.data.col(col));
        ++err_count;
      }
      if (err_count > 0) row.recon_rel_l2 = err_sum / err_count;
    } catch (const NonFiniteField&) {
      // A misidentified regime can hand the reduced model amplitudes far
      // off its attractor; report the blow-up as infinite error.
    }

    report.rows.push_back(row);
    report.measurements.push_back(meas);
    report.solutions.push_back(sol);
  }
  return report;
}

double TrialStats::accuracy(int time_index) const {
  if (trials == 0) return 0.0;
  const int true_id = true_regimes.at(time_index);
  for (std::size_t r = 0; r < regime_ids.size(); ++r) {
    if (regime_ids[r] == true_id)
      return 100.0 * counts(static_cast<Eigen::Index>(r), time_index) / trials;
  }
  return 0.0;
}

TrialStats run_monte_carlo(const ExperimentConfig& config,
                           const ModalLibrary& lib, SolverId solver,
                           int sensor_count) {
  ScheduleContext ctx = prepare_schedule(config, sensor_count);
  ctx.dictionary = compressed_dictionary(lib, ctx.sensors);

  TrialStats stats;
  stats.trials = config.trials;
  stats.times = config.measurement_times;
  for (double t : config.measurement_times)
    stats.true_regimes.push_back(
        ctx.schedule.segments[ctx.schedule.segment_at(t)].regime_id);
  for (const auto& regime : config.regimes) stats.regime_ids.push_back(regime.id);
  stats.counts = Eigen::MatrixXi::Zero(
      static_cast<Eigen::Index>(stats.regime_ids.size()),
      static_cast<Eigen::Index>(stats.times.size()));

  const int window = std::max(config.aggregate_window, 1);

  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t trial_seed = config.seed + static_cast<std::uint64_t>(trial);
    for (std::size_t ti = 0; ti < stats.times.size(); ++ti) {
      std::map<int, int> votes;
      for (int wi = 0; wi < window; ++wi) {
        const double t = stats.times[ti] + wi * config.snapshot_stride;
        const FieldState field = field_at(ctx, t, config.snapshot_stride);
        const Measurement meas = measure(
            field, ctx.sensors, config.sigma,
            mix_seed(trial_seed, static_cast<std::uint64_t>(ti) * 64 + wi));
        const SparseSolution sol =
            run_solver(solver, ctx.dictionary, meas.values);
        if (!sol.converged) ++stats.no_convergence;
        const Classification cls = classify(lib, sol);
        ++votes[cls.regime_id];
      }
      // Majority vote; ties go to the lowest regime id (map order).
      int predicted = votes.begin()->first;
      for (const auto& [id, n_votes] : votes) {
        if (n_votes > votes.at(predicted)) predicted = id;
      }
      for (std::size_t r = 0; r < stats.regime_ids.size(); ++r) {
        if (stats.regime_ids[r] == predicted) {
          ++stats.counts(static_cast<Eigen::Index>(r),
                         static_cast<Eigen::Index>(ti));
          break;
        }
      }
    }
  }
  return stats;
}

void write_accuracy_csv(const TrialStats& stats,
                        const std::filesystem::path& path) {
  std::ostringstream out;
  out << "true_regime,predicted_regime,time_label,count,percent\n";
  for (std::size_t ti = 0; ti < stats.times.size(); ++ti) {
    for (std::size_t r = 0; r < stats.regime_ids.size(); ++r) {
      const int count = stats.counts(static_cast<Eigen::Index>(r),
                                     static_cast<Eigen::Index>(ti));
      const double percent =
          stats.trials > 0 ? 100.0 * count / stats.trials : 0.0;
      out << stats.true_regimes[ti] << "," << stats.regime_ids[r] << ","
          << "t" << (ti + 1) << "," << count << "," << fmt(percent) << "\n";
    }
  }
  write_text(path, out.str());
}

void write_switching_csv(const SwitchingReport& report,
                         const std::filesystem::path& path) {
  std::ostringstream out;
  out << "segment,true_regime,predicted_regime,margin,recon_rel_l2\n";
  for (const auto& row : report.rows) {
    out << row.segment << "," << row.true_regime << ","
        << row.predicted_regime << "," << fmt(row.margin) << ","
        << fmt(row.recon_rel_l2) << "\n";
  }
  write_text(path, out.str());
}

void write_coefficients_csv(const SwitchingReport& report,
                            const ModalLibrary& lib,
                            const std::filesystem::path& path) {
  std::ostringstream out;
  out << "time_label,column,regime,real,imag,modulus\n";
  for (std::size_t ti = 0; ti < report.solutions.size(); ++ti) {
    const auto& coeffs = report.solutions[ti].coeffs;
    for (int col = 0; col < lib.p(); ++col) {
      out << "t" << (ti + 1) << "," << col << "," << lib.block_of_column(col)
          << "," << fmt(coeffs[col].real()) << "," << fmt(coeffs[col].imag())
          << "," << fmt(std::abs(coeffs[col])) << "\n";
    }
  }
  write_text(path, out.str());
}

void write_measurements_csv(const SwitchingReport& report,
                            const std::filesystem::path& path) {
  std::ostringstream out;
  out << "sensor_x,real,imag,time\n";
  for (const auto& meas : report.measurements) {
    for (int i = 0; i < report.sensors.m(); ++i) {
      out << fmt(report.sensors.positions[i]) << ","
          << fmt(meas.values[i].real()) << "," << fmt(meas.values[i].imag())
          << "," << fmt(meas.time) << "\n";
    }
  }
  write_text(path, out.str());
}

void write_snapshots_csv(const SnapshotMatrix& snaps, const GridSpec& grid,
                         const std::filesystem::path& path) {
  if (snaps.n() != grid.n())
    throw DimensionMismatch("write_snapshots_csv: grid size mismatch");
  std::ostringstream out;
  out << "x,real,imag,time\n";
  for (Eigen::Index c = 0; c < snaps.q(); ++c) {
    for (Eigen::Index r = 0; r < snaps.n(); ++r) {
      out << fmt(grid.nodes()[r]) << "," << fmt(snaps.data(r, c).real()) << ","
          << fmt(snaps.data(r, c).imag()) << "," << fmt(snaps.times[c])
          << "\n";
    }
  }
  write_text(path, out.str());
}

std::vector<MeasurementGroup> read_measurements_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line))
    throw FormatError(path.string() + ": empty measurement file");

  auto split = [](const std::string& text) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : text) {
      if (ch == ',') {
        fields.push_back(field);
        field.clear();
      } else if (ch != '\r') {
        field.push_back(ch);
      }
    }
    fields.push_back(field);
    return fields;
  };

  const auto header = split(line);
  if (header.size() != 4 || header[0] != "sensor_x" || header[1] != "real" ||
      header[2] != "imag" || header[3] != "time")
    throw FormatError(path.string() +
                      ": expected header sensor_x,real,imag,time");

  struct Row {
    double x, re, im, t;
  };
  std::vector<Row> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != 4)
      throw FormatError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 4 fields");
    Row row{};
    try {
      row.x = std::stod(fields[0]);
      row.re = std::stod(fields[1]);
      row.im = std::stod(fields[2]);
      row.t = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) +
                        ": bad number");
    }
    rows.push_back(row);
  }

  std::vector<MeasurementGroup> groups;
  for (const auto& row : rows) {
    MeasurementGroup* group = nullptr;
    for (auto& g : groups) {
      if (g.time == row.t) {
        group = &g;
        break;
      }
    }
    if (!group) {
      groups.push_back(MeasurementGroup{row.t, {}, {}});
      group = &groups.back();
    }
    group->positions.push_back(row.x);
    const Eigen::Index k = group->values.size();
    group->values.conservativeResize(k + 1);
    group->values[k] = {row.re, row.im};
  }
  return groups;
}

}  // namespace sparsedyn
