#pragma once

#include <cstdint>

#include "cscgd/linalg.hpp"
#include "cscgd/problem.hpp"
#include "cscgd/rng.hpp"

namespace cscgd::harness {

/// Monte Carlo estimates F(x) = f(E g) and Q(x) = q(E h) from one batch.
/// Standard errors come from the delta method on the batch means.
struct Evaluation {
  double F = 0.0;
  double F_se = 0.0;
  Vector Q;
  Vector Q_se;
  double max_Q = 0.0;  ///< -inf when there are no constraints
  double max_Q_se = 0.0;
  Vector mean_g;
  Vector mean_h;
  Vector se_g;  ///< standard error of each component of mean_g
  Vector se_h;
};

Evaluation evaluate(const CompositionalProblem& problem, const Vector& x, std::int64_t batch, RngStream& rng);

/// Stream id reserved for evaluation batches, so a seed's evaluation draws
/// never overlap its solver draws.
constexpr std::uint64_t kEvaluationStream = 0xe7a1;

}  // namespace cscgd::harness
