#pragma once

#include <optional>

#include "cscgd/linalg.hpp"
#include "cscgd/problem.hpp"

namespace cscgd::queuing {

/// Deterministic quadratic: g = x, f(y) = |y - target|^2 / 2 on a box,
/// optionally with the linear constraint sum(x) <= level (h = x, q(z) = sum z - level).
struct ToyQuadraticInstance {
  Vector target;
  Vector lower;
  Vector upper;
  std::optional<double> level;

  void validate() const;
};

CompositionalProblem toy_quadratic_build(const ToyQuadraticInstance& inst);

/// Exact minimum value and minimizer, by the same projection structure as the feasible set.
struct ToyOptimum {
  double value;
  Vector x;
};
ToyOptimum toy_quadratic_optimum(const ToyQuadraticInstance& inst);

ProblemConstants toy_quadratic_constants(const ToyQuadraticInstance& inst);

}  // namespace cscgd::queuing
