#pragma once

namespace cscgd::queuing {

/// Value and first partials of a scalar function of two arguments.
struct Eval2 {
  double value;
  double d_x;
  double d_y;
};

/// Value and derivative of a scalar function of one argument.
struct Eval1 {
  double value;
  double deriv;
};

/// x / (1 - y) for y < 1 - eps, continued linearly in y beyond the knee:
/// x (y - 1 + 2 eps) / eps^2. Continuous with continuous partials at y = 1 - eps.
Eval2 safeguarded_ratio(double x, double y, double eps);

/// 1 / d for d > eps, else the tangent line at eps: (2 eps - d) / eps^2.
Eval1 safeguarded_inverse(double d, double eps);

/// log(x) for x >= floor, else its second-order Taylor expansion at floor.
Eval1 safeguarded_log(double x, double floor);

/// Logistic function and its derivative.
Eval1 sigmoid(double t);

}  // namespace cscgd::queuing
