#pragma once

#include "cscgd/linalg.hpp"
#include "cscgd/problem.hpp"

namespace cscgd::queuing {

/// Parallel M/G/1 queues with fixed-rate transmission and retransmission on
/// outage. Decision x = (lambda_1..N, p_1..N). Channel gains are exponential
/// with mean `channel_mean` truncated below at `channel_floor`.
struct OutageInstance {
  Vector bandwidth;
  Vector rate;  ///< fixed transmission rates R_i
  double p_min = 10.0;
  double p_max = 100.0;
  double lambda_min = 0.1;
  double lambda_max = 25.0;
  double lambda_lim = 45.0;
  double eta = 1.0;  ///< sigmoid sharpness
  double channel_mean = 1.0;
  double channel_floor = 0.25;
  double capacity_margin = 0.95;
  Vector psi_bar;
  Vector phi_bar;
  double denominator_margin = 1e-9;
  double log_floor = 1e-9;

  Eigen::Index queues() const { return bandwidth.size(); }
  /// Also checks the bounded-gradient condition
  /// capacity_margin * R_i (1 - r_i(P_min, G)) >= lambda_max.
  void validate() const;
};

/// Smoothed outage indicator 1 / (1 + exp(-eta (R - b))) and its derivative in p.
double outage_indicator(double eta, double rate, double bandwidth, double p, double zeta);
double outage_indicator_dp(double eta, double rate, double bandwidth, double p, double zeta);

/// Hard indicator 1{R >= b}.
double outage_indicator_hard(double rate, double bandwidth, double p, double zeta);

/// Mean waiting time lambda (1 + rho) / (2 R (1 - rho) (R (1 - rho) - lambda)), safeguarded.
double outage_waiting_time(double rate, double rho, double lambda, double margin);

/// g = (r_i ; lambda_i), f(y) = sum phi_bar_i w_i(y) - psi_bar_i log(R_i (1 - y_i)). No constraint.
CompositionalProblem outage_build(const OutageInstance& inst);

ProblemConstants outage_constants(const OutageInstance& inst);

}  // namespace cscgd::queuing
