#pragma once

#include "cscgd/problem.hpp"

namespace cscgd::queuing {

/// U(mu) = r lambda / mu - h (lambda / mu) / (mu - lambda). Throws DomainError for mu <= lambda.
double mm1_utility(double mu, double lambda, double r, double h);

/// dU / dmu.
double mm1_utility_derivative(double mu, double lambda, double r, double h);

/// mu* = lambda + u + sqrt(u (u + lambda)), u = h / r.
double mm1_optimal_mu(double lambda, double r, double h);

struct Mm1Instance {
  double lambda = 1.0;
  double r = 1.0;
  double h = 1.0;
  /// Search interval [lambda + lower_offset, lambda + upper_offset].
  double lower_offset = 1e-3;
  double upper_offset = 10.0;

  void validate() const;
};

/// Deterministic problem: x = mu, g = x, f(y) = -U(y). No constraint.
CompositionalProblem mm1_build(const Mm1Instance& inst);

}  // namespace cscgd::queuing
