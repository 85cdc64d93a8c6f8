#pragma once

#include <vector>

#include "cscgd/distributions.hpp"
#include "cscgd/linalg.hpp"
#include "cscgd/problem.hpp"

namespace cscgd::queuing {

/// Resource provisioning for N service classes. The decision is stored as
/// x = (r_1, d_1, ..., d_{N-1}, C) with r_{i+1} = r_i + d_i, so the tier
/// constraints l (p_{i+1} - p_i) <= d_i <= u (p_{i+1} - p_i) are box bounds.
struct CloudInstance {
  Vector price;        ///< strictly increasing
  Vector subscribers;  ///< N_i
  double maintenance = 0.1;  ///< chi
  double tier_lower = 0.5;   ///< l
  double tier_upper = 2.0;   ///< u
  std::vector<Distribution> load;  ///< per-class load zeta_i
  double r1_min = 1.0;
  double r1_max = 5.0;
  double capacity_min = 10.0;
  double capacity_max = 100.0;
  double eta = 20.0;  ///< sigmoid sharpness on the normalized slack
  double denominator_margin = 1e-9;

  Eigen::Index classes() const { return price.size(); }
  void validate() const;
};

/// Resource units per class r from the stored decision.
Vector cloud_resources(const Vector& x);

/// Stored decision from per-class resources and total capacity.
Vector cloud_decision(const Vector& r, double capacity);

/// g = (a_i ; b_i ; C). With `hard`, the indicators are exact
/// a_i = 1{C - r_i < zeta'r <= C}, b_i = 1{zeta'r <= C}; otherwise sigmoid-smoothed.
Vector cloud_inner(const CloudInstance& inst, const Vector& x, const Vector& zeta, bool hard = false);

/// Blocking probabilities y_i / y_{N+i} from tracked or exact expectations of g.
Vector cloud_blocking(const Vector& y);

/// f(y) = sum -p_i N_i (1 - y_i / y_{N+i}) + chi y_{2N+1}: the negated profit.
CompositionalProblem cloud_build(const CloudInstance& inst);

ProblemConstants cloud_constants(const CloudInstance& inst);

}  // namespace cscgd::queuing
