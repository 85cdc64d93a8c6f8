#include "cscgd/queuing/toy.hpp"

#include "cscgd/errors.hpp"

namespace cscgd::queuing {

void ToyQuadraticInstance::validate() const {
  const Eigen::Index n = target.size();
  if (n < 1 || lower.size() != n || upper.size() != n) throw ConfigError("toy: dimension mismatch");
  if ((lower.array() > upper.array()).any()) throw ConfigError("toy: lower > upper");
  if (level && lower.sum() > *level) throw ConfigError("toy: constraint level below the box");
}

CompositionalProblem toy_quadratic_build(const ToyQuadraticInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.target.size();
  CompositionalProblem p;
  p.name = "toy-quadratic";
  p.dim_x = n;
  p.dim_g = n;
  p.sample = [](RngStream&) { return Vector::Zero(1).eval(); };
  p.inner_g = [](const Vector& x, const Vector&) { return x; };
  p.inner_g_jacobian = [n](const Vector&, const Vector&) { return Matrix::Identity(n, n).eval(); };
  const Vector target = inst.target;
  p.outer_f = [target](const Vector& y) { return 0.5 * (y - target).squaredNorm(); };
  p.outer_f_gradient = [target](const Vector& y) { return (y - target).eval(); };
  if (inst.level) {
    const double level = *inst.level;
    p.dim_h = n;
    p.num_constraints = 1;
    p.inner_h = [](const Vector& x, const Vector&) { return x; };
    p.inner_h_jacobian = [n](const Vector&, const Vector&) { return Matrix::Identity(n, n).eval(); };
    p.outer_q = [level](const Vector& z) { return Vector::Constant(1, z.sum() - level).eval(); };
    p.outer_q_jacobian = [n](const Vector&) { return Matrix::Ones(n, 1).eval(); };
  } else {
    make_unconstrained(p);
  }
  p.feasible_set = FeasibleSet::box(inst.lower, inst.upper);
  return p;
}

ToyOptimum toy_quadratic_optimum(const ToyQuadraticInstance& inst) {
  inst.validate();
  Vector x;
  if (inst.level) {
    x = project_box_with_sum_cap(inst.target, inst.lower, inst.upper, *inst.level);
  } else {
    x = inst.target.cwiseMax(inst.lower).cwiseMin(inst.upper);
  }
  return {0.5 * (x - inst.target).squaredNorm(), x};
}

ProblemConstants toy_quadratic_constants(const ToyQuadraticInstance& inst) {
  ProblemConstants k;
  const Vector span = inst.upper - inst.lower;
  const Vector far = (inst.target - inst.lower).cwiseAbs().cwiseMax((inst.target - inst.upper).cwiseAbs());
  k.C_f = far.squaredNorm();
  k.L_f = 1.0;
  k.C_g = static_cast<double>(inst.target.size());
  k.V_g = 0.0;
  k.C_h = inst.level ? static_cast<double>(inst.target.size()) : 0.0;
  k.V_h = 0.0;
  k.C_q = inst.level ? static_cast<double>(inst.target.size()) : 0.0;
  k.L_q = 0.0;
  k.D_x = span.squaredNorm();
  return k;
}

}  // namespace cscgd::queuing
