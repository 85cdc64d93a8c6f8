#pragma once

#include "cscgd/linalg.hpp"
#include "cscgd/problem.hpp"

namespace cscgd::queuing {

/// Parallel M/G/1 queues over fading channels with ergodic-capacity service.
/// Decision x = (lambda_1..N, p_1..N). Channel gains are chi-squared with
/// `dof` degrees of freedom truncated below at `channel_floor`.
struct Mg1ErgodicInstance {
  Vector bandwidth;  ///< B_i
  double p_min = 14.0;
  double p_max = 100.0;  ///< total power budget, also the per-queue bound
  double lambda_min = 0.1;
  double lambda_max = 15.0;
  double lambda_lim = 37.0;
  double r_min = 35.0;
  int dof = 10;
  double channel_floor = 0.25;
  double knee_margin = 0.95;  ///< eps of the safeguarded ratio
  Vector psi_bar;
  Vector phi_bar;
  double log_floor = 1e-9;

  Eigen::Index queues() const { return bandwidth.size(); }
  void validate() const;
};

/// b = B log(1 + zeta p).
double ergodic_rate(double bandwidth, double p, double zeta);
/// d b / d p = B zeta / (1 + zeta p).
double ergodic_rate_dp(double bandwidth, double p, double zeta);

/// g = (lambda_i ; lambda_i / b_i ; lambda_i / b_i^2),
/// f(y) = sum phi_bar_i s(y_{2N+i}, y_{N+i}) / 2 - psi_bar_i log y_i with s the safeguarded ratio,
/// h = -min_i b_i, q(z) = R_min + z.
CompositionalProblem mg1_ergodic_build(const Mg1ErgodicInstance& inst);

ProblemConstants mg1_ergodic_constants(const Mg1ErgodicInstance& inst);

}  // namespace cscgd::queuing
