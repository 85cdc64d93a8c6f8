#pragma once

#include <functional>
#include <limits>
#include <string>

#include "cscgd/feasible_set.hpp"
#include "cscgd/linalg.hpp"
#include "cscgd/rng.hpp"

namespace cscgd {

/// min_{x in X} f(E g(x, zeta))  s.t.  q(E h(x, zeta)) <= 0.
///
/// Jacobians follow the column convention of the update rule: the inner
/// Jacobian is n x m with entry (i, j) = d g_j / d x_i, and the outer
/// constraint Jacobian is d x J with entry (k, j) = d q_j / d z_k.
/// A problem with no expectation constraint has J = 0 and h returning zeros.
///
/// Instances are immutable after construction and may be shared read-only
/// between concurrently running solvers.
struct CompositionalProblem {
  std::string name;
  Eigen::Index dim_x = 0;
  Eigen::Index dim_g = 0;
  Eigen::Index dim_h = 0;
  Eigen::Index num_constraints = 0;

  std::function<Vector(RngStream&)> sample;

  std::function<Vector(const Vector& x, const Vector& zeta)> inner_g;
  std::function<Matrix(const Vector& x, const Vector& zeta)> inner_g_jacobian;
  std::function<Vector(const Vector& x, const Vector& zeta)> inner_h;
  std::function<Matrix(const Vector& x, const Vector& zeta)> inner_h_jacobian;

  std::function<double(const Vector& y)> outer_f;
  std::function<Vector(const Vector& y)> outer_f_gradient;
  std::function<Vector(const Vector& z)> outer_q;
  std::function<Matrix(const Vector& z)> outer_q_jacobian;

  FeasibleSet feasible_set = FeasibleSet::box(Vector::Zero(1), Vector::Ones(1));

  /// Throws ConfigError if a member is missing or the declared dims disagree
  /// with the feasible set.
  void validate() const;
};

/// Regularity constants of an instance (bounds on gradients, Jacobians and
/// variances over the feasible set). NaN marks a constant the instance does
/// not document.
struct ProblemConstants {
  static constexpr double kUnknown = std::numeric_limits<double>::quiet_NaN();
  double C_f = kUnknown;
  double L_f = kUnknown;
  double C_g = kUnknown;
  double V_g = kUnknown;
  double C_h = kUnknown;
  double V_h = kUnknown;
  double C_q = kUnknown;
  double L_q = kUnknown;
  double D_x = kUnknown;
};

/// Draws `draws` samples at random points of the bounding box projected onto
/// the feasible set and checks every map's output shape. Throws ConfigError
/// naming the first mismatching map.
void check_shapes(const CompositionalProblem& problem, RngStream& rng, int draws = 16);

/// A zero h map for problems without expectation constraints (d = 1, J = 0).
void make_unconstrained(CompositionalProblem& problem);

}  // namespace cscgd
