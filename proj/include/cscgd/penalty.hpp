#pragma once

#include "cscgd/linalg.hpp"

namespace cscgd {

/// Parameters of the saturating quadratic penalty: the constraint-tightening
/// margin `gamma` and the level `c_ell` where the quadratic turns linear.
struct PenaltyParams {
  double gamma = 0.0;
  double c_ell = 1.0;

  /// Requires 0 <= gamma < c_ell.
  void validate() const;
};

/// Scalar branch: 0 below zero, x^2/2 on [0, c_ell], c_ell x - c_ell^2/2 beyond.
double penalty_branch(double x, double c_ell);

/// Derivative of `penalty_branch`: clamp(x, 0, c_ell).
double penalty_branch_derivative(double x, double c_ell);

/// sum_j penalty_branch(w_j + gamma).
double penalty_value(const Vector& w, const PenaltyParams& params);

/// Componentwise derivative of `penalty_value`.
Vector penalty_gradient(const Vector& w, const PenaltyParams& params);

}  // namespace cscgd
