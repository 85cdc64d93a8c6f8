#pragma once

#include "cscgd/linalg.hpp"
#include "cscgd/problem.hpp"

namespace cscgd::queuing {

/// Parallel G/G/1 queues over fading channels, scored by effective capacity.
/// Decision x = p (per-queue power) on a box. Channel gains are exponential
/// with per-queue means. Arrival statistics are known.
struct EffectiveCapacityInstance {
  Vector bandwidth;
  double p_min = 0.1;
  double p_max = 0.9;
  double delay_target = 0.5;  ///< W
  Vector arrival_mean;        ///< m_i^a
  Vector arrival_var;         ///< (sigma_i^a)^2
  Vector channel_mean;
  double tail_normalizer = 1.0;  ///< eta in the delay tail eta exp(-theta alpha W)
  Vector psi_bar;
  Vector phi_bar;
  double denominator_margin = 1e-9;
  double log_floor = 1e-9;

  Eigen::Index queues() const { return bandwidth.size(); }
  void validate() const;
};

/// QoS exponent theta(u, v) = (u - m) / (s2 + v - u^2) and effective capacity
/// alpha(u, v) = m + theta s2 / 2, with the variance denominator safeguarded.
struct EffectiveCapacityEval {
  double theta;
  double theta_u;
  double theta_v;
  double alpha;
  double alpha_u;
  double alpha_v;
};
EffectiveCapacityEval effective_capacity(double u, double v, double arrival_mean, double arrival_var, double margin);

/// g = (b_i ; b_i^2), f(y) = sum -psi_bar_i log alpha_i + phi_bar_i eta exp(-theta_i alpha_i W). No constraint.
CompositionalProblem effective_capacity_build(const EffectiveCapacityInstance& inst);

ProblemConstants effective_capacity_constants(const EffectiveCapacityInstance& inst);

}  // namespace cscgd::queuing
