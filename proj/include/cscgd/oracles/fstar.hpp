#pragma once

#include <cstdint>
#include <vector>

#include "cscgd/linalg.hpp"
#include "cscgd/queuing/mg1_ergodic.hpp"
#include "cscgd/queuing/mg1_wired.hpp"

namespace cscgd::oracles {

struct Example1Optimum {
  double f_star = 0.0;
  Vector x_star;
  double gradient_map_norm = 0.0;
  int iterations = 0;
  /// Largest mean delay minus D_max at x_star.
  double max_delay_slack = 0.0;
};

/// Deterministic program in lambda with E L and E L^2 from quadrature. The
/// delay constraint is monotone in lambda_i, so it becomes an upper bound
/// 2 C^2 D / (E L^2 + 2 C D E L). Solved by projected gradient descent with
/// Armijo backtracking, then polished by bisection on the sum-cap multiplier
/// of the separable optimality conditions. Throws DomainError if the
/// tightened box is empty.
Example1Optimum example1_fstar(const queuing::Mg1WiredInstance& inst);

/// Objective of the deterministic program at lambda (+inf outside the stable region).
double example1_objective(const queuing::Mg1WiredInstance& inst, const Vector& lambda);

/// Brute-force cross-check: grid with `points` nodes per axis on the first
/// N-1 rates, the last rate minimized exactly on its feasible interval.
Example1Optimum example1_grid(const queuing::Mg1WiredInstance& inst, int points);

/// Projection onto {lo <= u <= hi, sum u <= cap} by sorting the breakpoints
/// of the piecewise-linear sum as a function of the multiplier.
Vector project_capped_box_sorted(const Vector& v, const Vector& lo, const Vector& hi, double cap);

struct GridSearchResult {
  std::vector<double> axis_lo;
  std::vector<double> axis_hi;
  std::vector<int> resolution;
  Vector best_point;
  double best_value = 0.0;
  double best_value_se = 0.0;
  /// R_min - E min b at the best point and its standard error.
  double best_constraint = 0.0;
  double best_constraint_se = 0.0;
  /// One flag per evaluated power grid node, in scan order.
  std::vector<bool> feasible;
  /// Objective at every feasible node (NaN at infeasible ones), same order.
  std::vector<double> values;
};

/// Grid over the power vector (p_min..p_max per axis, sum cap honoured) with
/// `resolution` nodes per axis. Expectations use one fixed set of
/// `mc_samples` channel draws shared by every node. At each feasible power
/// node the arrival rates are optimal for the separable convex program under
/// the sum cap. Requires mc_samples >= 1e5 unless `allow_small` is set.
GridSearchResult example2_fstar(const queuing::Mg1ErgodicInstance& inst, std::int64_t mc_samples, int resolution,
                                std::uint64_t seed = 0x5eed, bool allow_small = false);

}  // namespace cscgd::oracles
