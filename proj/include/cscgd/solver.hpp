#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cscgd/linalg.hpp"
#include "cscgd/penalty.hpp"
#include "cscgd/problem.hpp"
#include "cscgd/rng.hpp"
#include "cscgd/step_schedule.hpp"

namespace cscgd {

/// Iterate, tracking vectors and tail-average accumulator of one run.
struct SolverState {
  Vector x;
  Vector y;
  Vector z;
  std::int64_t t = 1;  ///< index of the iterate held in `x`
  Vector tail_sum;
  std::int64_t tail_count = 0;
};

/// Metrics recorded after step t (x is x_{t+1}, estimates use y_{t+1}, z_{t+1}).
struct TrajectoryRecord {
  std::int64_t t = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  Vector x;
  double objective_estimate = 0.0;
  Vector constraint_estimates;
  double step_sq_norm = 0.0;
};

/// Which parts of the update are active.
struct StepOptions {
  bool update_x = true;           ///< false: pure tracking, alpha = delta = 0
  bool constraint_step = true;    ///< false: delta = 0 (plain SCGD)
};

struct StepOutcome {
  SolverState state;
  TrajectoryRecord record;
};

/// One iteration: draw zeta_t, update the tracking vectors, then take the
/// projected quasi-gradient step using the updated y, z.
/// Throws NumericalError naming the map that produced a non-finite value.
StepOutcome cscgd_step(const CompositionalProblem& problem, SolverState state, const StepSchedule& schedule,
                       const PenaltyParams& penalty, RngStream& rng, const StepOptions& options = {});

enum class LogCadence {
  Auto,  ///< every iteration for T <= 10^4, else 1000 log-spaced points including 1 and T
  Every,
};

struct SolverConfig {
  StepSchedule schedule{0.9167, 0.5, 0.75, StepRegime::Constant, 10000};
  PenaltyParams penalty{};
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::optional<Vector> initial_x;
  StepOptions options{};
  LogCadence cadence = LogCadence::Auto;
};

struct RunResult {
  Vector x_hat;
  std::vector<TrajectoryRecord> trajectory;
  SolverState final_state;
};

/// Initial state: x_1 = projection of the configured point (default: the
/// set's centre), y_1 = g(x_1, zeta_0), z_1 = h(x_1, zeta_0) from one extra draw.
SolverState initial_state(const CompositionalProblem& problem, const SolverConfig& config, RngStream& rng);

/// Runs T iterations and returns the average of x_t over t in [ceil(T/2), T].
RunResult run(const CompositionalProblem& problem, const SolverConfig& config);

/// Iterations that are written to the trajectory under `cadence`.
std::vector<std::int64_t> logged_iterations(std::int64_t horizon, LogCadence cadence);

struct Lemma4Constants {
  double C_f;
  double C_g;
  double C_q;
  double C_h;
  double C_ell;
  double J;
};

struct Lemma4Point {
  std::int64_t t;
  double mean_step_sq;
  double std_err;
  double bound;
  bool flagged;
};

struct Lemma4Report {
  std::vector<Lemma4Point> points;
  int violations = 0;
};

/// Compares the across-run mean of |x_{t+1} - x_t|^2 against
/// 2 alpha_t^2 C_f C_g + 2 delta_t^2 J C_ell^2 C_q C_h; a point is flagged
/// when the mean exceeds the bound by more than `sigmas` standard errors.
/// All runs must log the same iterations.
Lemma4Report lemma4_diagnostic(const std::vector<std::vector<TrajectoryRecord>>& runs,
                               const Lemma4Constants& constants, double sigmas = 3.0);

/// Margin that makes the violation bound of the main theorem vanish:
/// sqrt(J T^(c-a) (omega + sqrt(C_f C_g) D_x) / 2^(c-a)). Needs C_f, C_g and D_x.
double zero_violation_gamma(const ProblemConstants& constants, const StepSchedule& schedule,
                            Eigen::Index constraints, double omega = 0.0);

}  // namespace cscgd
