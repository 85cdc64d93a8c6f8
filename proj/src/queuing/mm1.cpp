#include "cscgd/queuing/mm1.hpp"

#include <cmath>

#include "cscgd/distributions.hpp"
#include "cscgd/errors.hpp"

namespace cscgd::queuing {

double mm1_utility(double mu, double lambda, double r, double h) {
  if (!(mu > lambda)) throw DomainError("mm1: service rate must exceed the arrival rate");
  return r * lambda / mu - h * (lambda / mu) / (mu - lambda);
}

double mm1_utility_derivative(double mu, double lambda, double r, double h) {
  if (!(mu > lambda)) throw DomainError("mm1: service rate must exceed the arrival rate");
  const double w = mu - lambda;
  return -r * lambda / (mu * mu) + h * lambda * (2.0 * mu - lambda) / (mu * mu * w * w);
}

double mm1_optimal_mu(double lambda, double r, double h) {
  if (!(lambda > 0 && r > 0 && h > 0)) throw DomainError("mm1: lambda, r and h must be positive");
  const double u = h / r;
  return lambda + u + std::sqrt(u * (u + lambda));
}

void Mm1Instance::validate() const {
  if (!(lambda > 0 && r > 0 && h > 0)) throw ConfigError("mm1: lambda, r and h must be positive");
  if (!(lower_offset > 0) || upper_offset <= lower_offset) throw ConfigError("mm1: invalid search interval");
}

CompositionalProblem mm1_build(const Mm1Instance& inst) {
  inst.validate();
  CompositionalProblem p;
  p.name = "mm1";
  p.dim_x = 1;
  p.dim_g = 1;
  p.sample = [](RngStream&) { return Vector::Ones(1).eval(); };
  p.inner_g = [](const Vector& x, const Vector& zeta) { return x.cwiseProduct(zeta).eval(); };
  p.inner_g_jacobian = [](const Vector&, const Vector& zeta) { return Matrix::Constant(1, 1, zeta[0]); };
  p.outer_f = [inst](const Vector& y) { return -mm1_utility(y[0], inst.lambda, inst.r, inst.h); };
  p.outer_f_gradient = [inst](const Vector& y) {
    return Vector::Constant(1, -mm1_utility_derivative(y[0], inst.lambda, inst.r, inst.h)).eval();
  };
  make_unconstrained(p);
  p.feasible_set = FeasibleSet::box(Vector::Constant(1, inst.lambda + inst.lower_offset),
                                    Vector::Constant(1, inst.lambda + inst.upper_offset));
  return p;
}

}  // namespace cscgd::queuing
