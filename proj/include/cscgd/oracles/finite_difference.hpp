#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cscgd/linalg.hpp"
#include "cscgd/problem.hpp"
#include "cscgd/rng.hpp"

namespace cscgd::oracles {

struct FdReport {
  double max_rel_err = 0.0;
  bool skipped = false;
  std::string reason;
  Eigen::Index worst_input = -1;
  Eigen::Index worst_output = -1;
};

/// Compares an analytic Jacobian in the n x m layout (entry (i, j) = d map_j / d x_i)
/// with centered differences of `map`, step h max(1, |x_i|).
/// Each entry's error is relative to max(|analytic|, |fd|, 1e-8 * largest |fd| in its column),
/// after subtracting the rounding bound 8 eps max(|map(x+)|, |map(x-)|) / (2 step) of the difference quotient.
/// `kink_distance`, when given, returns the distance from a point to the
/// nearest nondifferentiable point; closer than 10 h skips the check.
FdReport finite_difference_check(const std::function<Vector(const Vector&)>& map,
                                 const std::function<Matrix(const Vector&)>& jacobian, const Vector& point,
                                 double h = 1e-6,
                                 const std::function<double(const Vector&)>& kink_distance = {});

/// Scalar version: the gradient is a column vector.
FdReport finite_difference_check(const std::function<double(const Vector&)>& fn,
                                 const std::function<Vector(const Vector&)>& gradient, const Vector& point,
                                 double h = 1e-6,
                                 const std::function<double(const Vector&)>& kink_distance = {});

struct GradientSuiteReport {
  std::string map;  ///< inner_g, inner_h, outer_f or outer_q
  double max_rel_err = 0.0;
  int points = 0;
  int skipped = 0;
};

/// Checks every map of `problem` at `points` random interior points. x is
/// drawn uniformly in the bounding box, projected and pulled 5% toward the
/// centre; y and z are averages of 64 inner-map samples at that x.
std::vector<GradientSuiteReport> gradient_suite(const CompositionalProblem& problem, int points, RngStream& rng,
                                                double h = 1e-6);

}  // namespace cscgd::oracles
