#pragma once

#include "cscgd/linalg.hpp"
#include "cscgd/problem.hpp"

namespace cscgd::queuing {

/// Parallel M/G/1 queues sharing one source. Decision: arrival rates lambda_i.
/// Packet lengths are truncated exponential with mean `mean_length` and cap
/// `max_length`. Utility psi_i = psi_bar_i log, delay cost phi_i = phi_bar_i x.
struct Mg1WiredInstance {
  Vector capacity;     ///< C_i
  double lambda_min = 0.1;
  Vector lambda_max;   ///< per-queue upper bound
  double lambda_lim = 15.0;
  double d_max = 0.05;
  Vector psi_bar;
  Vector phi_bar;
  Vector mean_length;
  Vector max_length;
  /// Capacity margin eps in lambda_max_i <= eps C_i / L_max_i.
  double capacity_margin = 0.95;
  /// When false, a violated capacity margin is tolerated; the denominator
  /// safeguard keeps the outer functions finite.
  bool strict_capacity_margin = true;
  double denominator_margin = 1e-9;
  double log_floor = 1e-9;

  Eigen::Index queues() const { return capacity.size(); }
  void validate() const;
  /// True when lambda_max_i <= capacity_margin * C_i / L_max_i for every queue.
  bool capacity_margin_holds() const;
};

/// g = (lambda_i L_i ; lambda_i L_i^2), h = g,
/// f(y) = sum phi_bar_i y_{N+i} / (2 C_i (C_i - y_i)) - psi_bar_i log y_i,
/// q(z) = max_i z_{N+i} / (2 C_i (C_i - z_i)) - D_max.
CompositionalProblem mg1_wired_build(const Mg1WiredInstance& inst);

/// Mean PK waiting delay of each queue given first and second moments of g.
Vector mg1_wired_delays(const Mg1WiredInstance& inst, const Vector& y);

ProblemConstants mg1_wired_constants(const Mg1WiredInstance& inst);

/// E[L_i^k] for each queue's packet-length distribution.
Vector mg1_wired_length_moment(const Mg1WiredInstance& inst, int k);

}  // namespace cscgd::queuing
