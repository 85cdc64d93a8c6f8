#include "cscgd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cscgd/errors.hpp"

namespace cscgd {
namespace {

template <class T>
const T& finite_or_throw(const T& value, const char* map, std::int64_t t) {
  if (!value.allFinite()) {
    throw NumericalError(std::string("non-finite value from ") + map + " at iteration " + std::to_string(t), map,
                         static_cast<long>(t));
  }
  return value;
}

double finite_or_throw(double value, const char* map, std::int64_t t) {
  if (!std::isfinite(value)) {
    throw NumericalError(std::string("non-finite value from ") + map + " at iteration " + std::to_string(t), map,
                         static_cast<long>(t));
  }
  return value;
}

}  // namespace

StepOutcome cscgd_step(const CompositionalProblem& problem, SolverState state, const StepSchedule& schedule,
                       const PenaltyParams& penalty, RngStream& rng, const StepOptions& options) {
  const std::int64_t t = state.t;
  const StepSizes steps = schedule.at(t);
  const double alpha = options.update_x ? steps.alpha : 0.0;
  const double delta =
      (options.update_x && options.constraint_step && problem.num_constraints > 0) ? steps.delta : 0.0;
  const double beta = steps.beta;

  if (t >= schedule.tail_start()) {
    state.tail_sum += state.x;
    ++state.tail_count;
  }

  const Vector zeta = problem.sample(rng);
  const Vector& x = state.x;
  const Vector g = finite_or_throw(problem.inner_g(x, zeta), "inner_g", t);
  const Vector h = finite_or_throw(problem.inner_h(x, zeta), "inner_h", t);
  state.y = (1.0 - beta) * state.y + beta * g;
  state.z = (1.0 - beta) * state.z + beta * h;

  const double f_est = finite_or_throw(problem.outer_f(state.y), "outer_f", t);
  const Vector q_est = finite_or_throw(problem.outer_q(state.z), "outer_q", t);

  Vector direction = Vector::Zero(problem.dim_x);
  if (alpha > 0.0) {
    const Matrix jg = finite_or_throw(problem.inner_g_jacobian(x, zeta), "inner_g_jacobian", t);
    const Vector fgrad = finite_or_throw(problem.outer_f_gradient(state.y), "outer_f_gradient", t);
    direction += alpha * (jg * fgrad);
  }
  if (delta > 0.0) {
    const Matrix jh = finite_or_throw(problem.inner_h_jacobian(x, zeta), "inner_h_jacobian", t);
    const Matrix jq = finite_or_throw(problem.outer_q_jacobian(state.z), "outer_q_jacobian", t);
    direction += delta * (jh * (jq * penalty_gradient(q_est, penalty)));
  }

  TrajectoryRecord record;
  record.t = t;
  record.alpha = alpha;
  record.beta = beta;
  record.delta = delta;
  record.objective_estimate = f_est;
  record.constraint_estimates = q_est;

  if (alpha > 0.0 || delta > 0.0) {
    Vector next = problem.feasible_set.project(x - direction);
    record.step_sq_norm = (next - x).squaredNorm();
    state.x = std::move(next);
  }
  record.x = state.x;
  ++state.t;
  return {std::move(state), std::move(record)};
}

SolverState initial_state(const CompositionalProblem& problem, const SolverConfig& config, RngStream& rng) {
  SolverState state;
  const Vector start = config.initial_x ? *config.initial_x : problem.feasible_set.center();
  if (start.size() != problem.dim_x) throw ConfigError("initial point has the wrong dimension");
  state.x = problem.feasible_set.project(start);
  const Vector zeta0 = problem.sample(rng);
  state.y = finite_or_throw(problem.inner_g(state.x, zeta0), "inner_g", 0);
  state.z = finite_or_throw(problem.inner_h(state.x, zeta0), "inner_h", 0);
  state.t = 1;
  state.tail_sum = Vector::Zero(problem.dim_x);
  state.tail_count = 0;
  return state;
}

std::vector<std::int64_t> logged_iterations(std::int64_t horizon, LogCadence cadence) {
  std::vector<std::int64_t> out;
  if (cadence == LogCadence::Every || horizon <= 10000) {
    out.resize(static_cast<std::size_t>(horizon));
    for (std::int64_t t = 1; t <= horizon; ++t) out[static_cast<std::size_t>(t - 1)] = t;
    return out;
  }
  // 1000 distinct points from 1 to T, each ratio spread over the points left.
  constexpr int kPoints = 1000;
  out.push_back(1);
  for (int k = 1; k < kPoints; ++k) {
    const std::int64_t prev = out.back();
    const int left = kPoints - k;
    const double ratio = std::pow(static_cast<double>(horizon) / static_cast<double>(prev), 1.0 / left);
    std::int64_t next = std::max<std::int64_t>(prev + 1, std::llround(static_cast<double>(prev) * ratio));
    next = std::min<std::int64_t>(next, horizon - (left - 1));
    out.push_back(next);
  }
  return out;
}

RunResult run(const CompositionalProblem& problem, const SolverConfig& config) {
  problem.validate();
  config.penalty.validate();
  const StepSchedule& schedule = config.schedule;
  if (schedule.horizon() < 2) throw ConfigError("run needs a horizon T >= 2");

  RngStream rng(config.seed, config.stream_id);
  SolverState state = initial_state(problem, config, rng);

  const auto logged = logged_iterations(schedule.horizon(), config.cadence);
  RunResult result;
  result.trajectory.reserve(logged.size());
  auto next_log = logged.begin();
  for (std::int64_t t = 1; t <= schedule.horizon(); ++t) {
    StepOutcome out = cscgd_step(problem, std::move(state), schedule, config.penalty, rng, config.options);
    state = std::move(out.state);
    if (next_log != logged.end() && *next_log == t) {
      result.trajectory.push_back(std::move(out.record));
      ++next_log;
    }
  }
  result.x_hat = state.tail_sum / static_cast<double>(state.tail_count);
  result.final_state = std::move(state);
  return result;
}

Lemma4Report lemma4_diagnostic(const std::vector<std::vector<TrajectoryRecord>>& runs,
                               const Lemma4Constants& constants, double sigmas) {
  Lemma4Report report;
  if (runs.empty() || runs.front().empty()) return report;
  const std::size_t len = runs.front().size();
  for (const auto& r : runs) {
    if (r.size() != len) throw ConfigError("lemma4_diagnostic: runs have different lengths");
  }
  const double n = static_cast<double>(runs.size());
  for (std::size_t k = 0; k < len; ++k) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& r : runs) {
      sum += r[k].step_sq_norm;
      sum_sq += r[k].step_sq_norm * r[k].step_sq_norm;
    }
    const double mean = sum / n;
    const double var = runs.size() > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    const double se = std::sqrt(var / n);
    const auto& rec = runs.front()[k];
    const double bound = 2.0 * rec.alpha * rec.alpha * constants.C_f * constants.C_g +
                         2.0 * rec.delta * rec.delta * constants.J * constants.C_ell * constants.C_ell *
                             constants.C_q * constants.C_h;
    const bool flagged = mean - sigmas * se > bound;
    report.points.push_back({rec.t, mean, se, bound, flagged});
    if (flagged) ++report.violations;
  }
  return report;
}

double zero_violation_gamma(const ProblemConstants& constants, const StepSchedule& schedule,
                            Eigen::Index constraints, double omega) {
  const double lip = std::sqrt(constants.C_f * constants.C_g) * constants.D_x;
  if (!std::isfinite(lip)) throw ConfigError("zero_violation_gamma: C_f, C_g or D_x undocumented");
  if (omega < 0.0) throw ConfigError("zero_violation_gamma: omega < 0");
  const double e = schedule.c() - schedule.a();
  const double t = static_cast<double>(schedule.horizon());
  return std::sqrt(static_cast<double>(constraints) * std::pow(t, e) * (omega + lip) / std::pow(2.0, e));
}

}  // namespace cscgd
