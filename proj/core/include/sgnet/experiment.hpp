#pragma once

// Declarative experiment runner: key = value configs with sweep lists, one
// results.csv row per (N, P, method).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgnet/fields.hpp"
#include "sgnet/losses.hpp"
#include "sgnet/metrics.hpp"
#include "sgnet/net.hpp"
#include "sgnet/train.hpp"

namespace sgnet {

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Exp1;
  std::vector<int> N{1};
  std::vector<int> P{0};
  std::vector<LossKind> methods{LossKind::Galerkin};

  int width = 45;
  int depth = 4;
  Activation first_activation = Activation::Swish;
  Activation hidden_activation = Activation::Swish;

  TrainConfig train;
  std::size_t validation_samples = 10000;

  Weighting weighting = Weighting::None;
  double output_scale = 1.0;
  int quad_nodes = 40;

  std::size_t n_mc = 10000;
  /// Trapezoid points per direction for the analytic exp1 reference.
  int grid_points = 257;
  /// FEM cells per direction for pathwise references (512 in 1-D, 64 in 2-D).
  int fem_cells = 0;
  /// Also solve the coupled SGA-FEM system and record the distance to it.
  bool coupled_oracle = false;
  /// Allows the coupled oracle on 2-D meshes.
  bool coupled_2d = false;
  int coupled_cells = 0;

  std::string output_dir = "out";
  bool save_nets = true;
  std::size_t jobs = 1;

  std::uint64_t seed_weights = 0;
  std::uint64_t seed_sobol = 0;
  std::uint64_t seed_mc = 0;
  std::uint64_t seed_validation = 0;

  int spatial_dim() const { return experiment == ExperimentKind::Exp2 ? 2 : 1; }
  int resolved_fem_cells() const;
  int resolved_coupled_cells() const;

  /// Throws ConfigError with the 1-based line and column of the offending token.
  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig parse_file(const std::string& path);
};

struct RunSpec {
  ExperimentKind experiment;
  LossKind method;
  int N;
  int P;
  std::size_t basis_size;
};

/// Cartesian product N x P x method in that nesting order.
std::vector<RunSpec> expand_sweep(const ExperimentConfig& config);

struct RunResult {
  RunSpec spec{};
  ErrorReport error;
  TrainResult training;
  /// Spectral H1 distance to the coupled SGA-FEM solution, when requested.
  std::optional<ErrorReport> coupled;
};

std::string run_name(const RunSpec& spec);

/// Builds basis, field, tensor and net; trains and evaluates one sweep entry.
RunResult run_single(const ExperimentConfig& config, const RunSpec& spec);

struct ResultsRow {
  std::string experiment;
  std::string method;
  int N = 0;
  int P = 0;
  std::size_t M_plus_1 = 0;
  double rel_error = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double train_seconds = 0.0;
  std::size_t epochs = 0;
  double final_risk = 0.0;
  double final_validation = 0.0;
  std::uint64_t seed_weights = 0;
  std::uint64_t seed_sobol = 0;
  std::uint64_t seed_mc = 0;
};

extern const std::vector<std::string> kResultsColumns;

ResultsRow make_row(const ExperimentConfig& config, const RunResult& result);
std::string format_row(const ResultsRow& row);
/// Throws InvalidArgument on missing columns or malformed values.
std::vector<ResultsRow> read_results(std::istream& in);
std::vector<ResultsRow> read_results_file(const std::string& path);

/// Exit codes of the runner.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitAborted = 3, kExitIo = 4, kExitOther = 1 };

/// Runs the whole sweep, appending rows to <output_dir>/results.csv as they
/// finish. Diagnostics go to `log`.
int run_experiment(const std::string& config_path, std::ostream& log);
int run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace sgnet
