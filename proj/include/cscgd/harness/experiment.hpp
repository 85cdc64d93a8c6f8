#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cscgd/harness/config.hpp"
#include "cscgd/harness/csv.hpp"
#include "cscgd/queuing/presets.hpp"
#include "cscgd/solver.hpp"

namespace cscgd::harness {

/// Baseline objective value for the optimality gap.
struct OracleValue {
  double f_star = 0.0;
  Vector x_star;
  std::string method;
  /// True when f_star is itself a sample estimate. The gap is then measured
  /// against a fresh evaluation at x_star with the same batch as F(x_hat).
  bool mc_based = false;
};

/// Oracles cheap enough to compute on demand (closed form or deterministic);
/// nullopt for the rest.
std::optional<OracleValue> inline_oracle(const queuing::BuiltPreset& preset);

/// Any preset: deterministic program, brute-force grid or local baseline.
/// May take minutes.
OracleValue compute_oracle(const queuing::BuiltPreset& preset);

/// Cache file for a preset's instance: <dir>/<name>-<fnv of the instance JSON>.json.
std::string oracle_cache_path(const std::string& dir, const queuing::BuiltPreset& preset);
std::optional<OracleValue> load_oracle(const std::string& path);
void store_oracle(const std::string& path, const OracleValue& value);

struct RunSummary {
  std::uint64_t seed = 0;
  Vector x_hat;
  double F = 0.0;
  double F_se = 0.0;
  double max_Q = 0.0;
  double max_Q_se = 0.0;
  std::optional<double> gap;  ///< F(x_hat) - F*
  std::optional<double> gap_se;
  double f_tracked = 0.0;  ///< f(y_T) from the last trajectory record
  std::string config_hash;
  double wall_seconds = 0.0;  ///< not written to any file
};

struct ExperimentResult {
  ExperimentConfig config;
  std::string hash;
  queuing::BuiltPreset preset;
  std::optional<OracleValue> oracle;
  std::vector<RunSummary> runs;  ///< in config.seeds order
  std::vector<std::vector<TrajectoryRecord>> trajectories;
};

struct RunOptions {
  int threads = 0;  ///< 0: hardware concurrency
  bool write_files = true;
};

/// Runs every seed, evaluates x_hat on a fresh batch and writes
/// trajectory_seed<S>.csv, runs.csv, summary.csv, plot.csv and config.json
/// into the output directory. Throws ConfigError when the gap is requested
/// but no oracle value is available.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

SolverConfig solver_config(const ExperimentConfig& config, const queuing::BuiltPreset& preset, std::uint64_t seed,
                           std::int64_t horizon);

CsvWriter trajectory_csv(const std::vector<TrajectoryRecord>& trajectory, Eigen::Index constraints);
/// Mean and sample std over seeds of objective, max violation and step size per logged t.
CsvWriter summary_csv(const std::vector<std::vector<TrajectoryRecord>>& trajectories);
/// t, mean_gap, std_gap, mean_violation, std_violation on at most `max_points`
/// log-spaced logged iterations (first and last always kept). Without f_star
/// the gap columns hold the raw objective and are named mean_obj, std_obj.
CsvWriter plot_csv(const std::vector<std::vector<TrajectoryRecord>>& trajectories, std::optional<double> f_star,
                   int max_points = 200);

/// Indices into `ts` (sorted, positive) nearest to log-spaced targets.
std::vector<std::size_t> log_subsample(const std::vector<std::int64_t>& ts, int max_points);

/// Final gap |F(x_hat) - F*| and max violation for every (horizon, seed),
/// without writing files. values[k][s] belongs to horizons[k], seeds[s].
struct RateLadder {
  std::vector<double> horizons;
  std::vector<std::vector<double>> gap;
  std::vector<std::vector<double>> violation;
  std::vector<std::vector<std::vector<TrajectoryRecord>>> trajectories;  ///< [k][s]
};
RateLadder rate_ladder(const ExperimentConfig& base, const std::vector<std::int64_t>& horizons, int threads = 0);

}  // namespace cscgd::harness
