// Command-line front end for the sparse-sensing pipeline: simulate CQGLE
// regimes, build the overcomplete modal library, classify measurements, and
// run the switching / Monte-Carlo experiments with CSV reports.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sparsedyn/errors.hpp"
#include "sparsedyn/harness.hpp"

namespace {

using namespace sparsedyn;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

SolverId parse_solver(const std::string& name) {
  if (name == "l1") return SolverId::l1;
  if (name == "omp") return SolverId::omp;
  if (name == "ls") return SolverId::least_squares;
  throw ConfigError("unknown solver '" + name + "' (expected l1|omp|ls)");
}

std::filesystem::path manifest_path(const std::filesystem::path& lib_path) {
  return lib_path.string() + ".manifest";
}

struct CommonOptions {
  std::string config_path;
  std::string lib_path;
  std::string out_path;
  std::string out_dir;
  std::string solver = "l1";
  std::string measurements_path;
  std::string mode;
  int regime = 1;
  int sensors = 3;
  double sigma = -1.0;  // <0: keep config value
  long trials = -1;
  long long seed = -1;
  int aggregate_window = -1;
};

ExperimentConfig configure(const CommonOptions& opt) {
  ExperimentConfig config =
      opt.config_path.empty() ? default_config() : load_config(opt.config_path);
  if (opt.sigma >= 0.0) config.sigma = opt.sigma;
  if (opt.trials >= 1) config.trials = static_cast<int>(opt.trials);
  if (opt.seed >= 0) config.seed = static_cast<std::uint64_t>(opt.seed);
  if (opt.aggregate_window >= 0) config.aggregate_window = opt.aggregate_window;
  config.validate();
  return config;
}

int cmd_simulate(const CommonOptions& opt) {
  const ExperimentConfig config = configure(opt);
  const GridSpec grid = config.make_grid();
  const RegimeSpec& regime = config.regime(opt.regime);

  std::vector<double> snap_times;
  for (double t = config.snapshot_start; t <= config.snapshot_end + 1e-9;
       t += config.snapshot_stride)
    snap_times.push_back(t);

  const FieldState ic =
      initial_condition(grid, config.ic_amplitude, config.ic_width);
  const SimulationResult run = simulate(regime.params, ic, config.snapshot_end,
                                        config.dt, snap_times, regime.id);
  write_snapshots_csv(run.snapshots, grid, opt.out_path);
  std::cout << "wrote " << run.snapshots.q() << " snapshots of regime "
            << regime.id << " to " << opt.out_path << "\n";
  return kExitOk;
}

int cmd_build_library(const CommonOptions& opt) {
  const ExperimentConfig config = configure(opt);
  const ModalLibrary lib = build_all(config);
  save_library(lib, opt.out_path);
  write_manifest(config, lib, manifest_path(opt.out_path));
  std::cout << "library: " << lib.block_count() << " blocks, p = " << lib.p()
            << " columns (ranks:";
  for (const auto& block : lib.blocks())
    std::cout << " " << block.regime_id << ":" << block.rank();
  std::cout << ")\n";
  return kExitOk;
}

int cmd_classify(const CommonOptions& opt) {
  const ModalLibrary lib = load_library(opt.lib_path);
  const GridSpec grid = grid_from_manifest(manifest_path(opt.lib_path));
  const SolverId solver = parse_solver(opt.solver);

  const auto groups = read_measurements_csv(opt.measurements_path);
  if (groups.empty()) throw ConfigError("measurement file has no rows");

  for (const auto& group : groups) {
    const SensorSet sensors = place_sensors(grid, group.positions);
    const Eigen::MatrixXcd G = compressed_dictionary(lib, sensors);
    const SparseSolution sol = run_solver(solver, G, group.values);
    const Classification cls = classify(lib, sol);
    std::cout << "time=" << group.time << " predicted=" << cls.regime_id
              << " margin=" << cls.margin << " scores=[";
    for (Eigen::Index j = 0; j < cls.block_scores.size(); ++j) {
      if (j) std::cout << " ";
      std::cout << lib.block(static_cast<int>(j)).regime_id << ":"
                << cls.block_scores[j];
    }
    std::cout << "]" << (sol.converged ? "" : " (no convergence)") << "\n";
  }
  return kExitOk;
}

int cmd_experiment(const CommonOptions& opt) {
  const ExperimentConfig config = configure(opt);
  const ModalLibrary lib = load_library(opt.lib_path);
  const SolverId solver = parse_solver(opt.solver);
  const std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);

  if (opt.mode == "switching") {
    const SwitchingReport report =
        run_switching_experiment(config, lib, solver, opt.sensors);
    write_switching_csv(report, dir / "switching.csv");
    write_coefficients_csv(report, lib, dir / "coefficients.csv");
    write_measurements_csv(report, dir / "measurements.csv");
    for (const auto& row : report.rows) {
      std::cout << "t=" << row.measurement_time << " true=" << row.true_regime
                << " predicted=" << row.predicted_regime
                << " margin=" << row.margin
                << " recon_rel_l2=" << row.recon_rel_l2 << "\n";
    }
    return kExitOk;
  }
  if (opt.mode == "montecarlo") {
    const TrialStats stats = run_monte_carlo(config, lib, solver, opt.sensors);
    write_accuracy_csv(stats, dir / "accuracy.csv");
    for (std::size_t ti = 0; ti < stats.times.size(); ++ti) {
      std::cout << "t" << (ti + 1) << " (true regime " << stats.true_regimes[ti]
                << "): accuracy " << stats.accuracy(static_cast<int>(ti))
                << "% over " << stats.trials << " trials\n";
    }
    if (stats.no_convergence > 0)
      std::cout << "flagged " << stats.no_convergence
                << " non-converged solves\n";
    return kExitOk;
  }
  throw ConfigError("experiment mode must be switching or montecarlo");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse classification and Galerkin reconstruction of CQGLE "
               "bifurcation regimes"};
  app.require_subcommand(1);

  CommonOptions opt;

  auto* sim = app.add_subcommand("simulate", "Integrate one regime and dump "
                                             "its snapshot window as CSV");
  sim->add_option("--regime", opt.regime, "Regime id to simulate")->required();
  sim->add_option("--config", opt.config_path, "Config file (defaults built in)");
  sim->add_option("--out", opt.out_path, "Output snapshot CSV")->required();

  auto* build = app.add_subcommand("build-library",
                                   "Build the modal library over all regimes");
  build->add_option("--config", opt.config_path, "Config file");
  build->add_option("--out", opt.out_path, "Output library file")->required();

  auto* cls = app.add_subcommand("classify",
                                 "Classify measurements against a library");
  cls->add_option("--lib", opt.lib_path, "Library file")->required();
  cls->add_option("--measurements", opt.measurements_path,
                  "Measurement CSV (sensor_x,real,imag,time)")
      ->required();
  cls->add_option("--solver", opt.solver, "l1|omp|ls");

  auto* exp = app.add_subcommand("experiment",
                                 "Run the switching or Monte-Carlo study");
  exp->add_option("mode", opt.mode, "switching|montecarlo")->required();
  exp->add_option("--config", opt.config_path, "Config file");
  exp->add_option("--lib", opt.lib_path, "Library file")->required();
  exp->add_option("--out-dir", opt.out_dir, "Report directory")->required();
  exp->add_option("--sensors", opt.sensors, "Sensor count (3 or 5)");
  exp->add_option("--sigma", opt.sigma, "Measurement noise level");
  exp->add_option("--trials", opt.trials, "Monte-Carlo trial count");
  exp->add_option("--seed", opt.seed, "Base RNG seed");
  exp->add_option("--solver", opt.solver, "l1|omp|ls");
  exp->add_option("--aggregate-window", opt.aggregate_window,
                  "Majority vote over this many consecutive samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sim->parsed()) return cmd_simulate(opt);
    if (build->parsed()) return cmd_build_library(opt);
    if (cls->parsed()) return cmd_classify(opt);
    if (exp->parsed()) return cmd_experiment(opt);
    std::cerr << "no subcommand given\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NonFiniteField& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const EigenFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DegenerateData& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
