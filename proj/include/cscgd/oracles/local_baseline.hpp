#pragma once

#include <cstdint>
#include <optional>

#include "cscgd/linalg.hpp"
#include "cscgd/penalty.hpp"
#include "cscgd/problem.hpp"

namespace cscgd::oracles {

struct LocalBaselineOptions {
  std::int64_t samples = 4000;
  std::uint64_t seed = 0xba5e;
  int max_iterations = 2000;
  double tolerance = 1e-8;
  std::optional<Vector> x0;  ///< defaults to the feasible set's center
  PenaltyParams penalty;     ///< used only when the problem has constraints
};

struct LocalBaseline {
  Vector x;
  double value = 0.0;
  double initial_value = 0.0;
  double gradient_map_norm = 0.0;
  int iterations = 0;
};

/// Locally optimal value of the sample-average problem
/// f(mean_s g(x, zeta_s)) + l(q(mean_s h(x, zeta_s))) over the feasible set,
/// by projected gradient descent with Armijo backtracking from x0. The
/// samples are drawn once and reused at every iterate. Not a global certificate.
LocalBaseline local_baseline(const CompositionalProblem& problem, const LocalBaselineOptions& options = {});

}  // namespace cscgd::oracles
