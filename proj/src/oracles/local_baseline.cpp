#include "cscgd/oracles/local_baseline.hpp"

#include <cmath>
#include <vector>

#include "cscgd/errors.hpp"
#include "cscgd/rng.hpp"

namespace cscgd::oracles {

namespace {

struct Saa {
  const CompositionalProblem& p;
  std::vector<Vector> zeta;
  PenaltyParams penalty;

  double value(const Vector& x) const {
    Vector y = Vector::Zero(p.dim_g);
    Vector z = Vector::Zero(p.dim_h);
    for (const auto& s : zeta) {
      y += p.inner_g(x, s);
      if (p.num_constraints > 0) z += p.inner_h(x, s);
    }
    const double n = static_cast<double>(zeta.size());
    double v = p.outer_f(y / n);
    if (p.num_constraints > 0) v += penalty_value(p.outer_q(z / n), penalty);
    return v;
  }

  Vector gradient(const Vector& x) const {
    Vector y = Vector::Zero(p.dim_g);
    Vector z = Vector::Zero(p.dim_h);
    Matrix jg = Matrix::Zero(p.dim_x, p.dim_g);
    Matrix jh = Matrix::Zero(p.dim_x, p.dim_h);
    for (const auto& s : zeta) {
      y += p.inner_g(x, s);
      jg += p.inner_g_jacobian(x, s);
      if (p.num_constraints > 0) {
        z += p.inner_h(x, s);
        jh += p.inner_h_jacobian(x, s);
      }
    }
    const double n = static_cast<double>(zeta.size());
    Vector grad = (jg / n) * p.outer_f_gradient(y / n);
    if (p.num_constraints > 0) {
      const Vector zm = z / n;
      grad += (jh / n) * (p.outer_q_jacobian(zm) * penalty_gradient(p.outer_q(zm), penalty));
    }
    return grad;
  }
};

}  // namespace

LocalBaseline local_baseline(const CompositionalProblem& problem, const LocalBaselineOptions& options) {
  problem.validate();
  if (options.samples < 1 || options.max_iterations < 0) throw ConfigError("local baseline: invalid options");
  Saa saa{problem, {}, options.penalty};
  RngStream rng(options.seed, 0);
  saa.zeta.reserve(static_cast<std::size_t>(options.samples));
  for (std::int64_t s = 0; s < options.samples; ++s) saa.zeta.push_back(problem.sample(rng));

  const auto& set = problem.feasible_set;
  Vector x = set.project(options.x0.value_or(set.center()));
  double fx = saa.value(x);
  LocalBaseline out;
  out.initial_value = fx;
  double step = 1.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const Vector g = saa.gradient(x);
    out.gradient_map_norm = (x - set.project(x - g)).norm();
    out.iterations = it;
    if (out.gradient_map_norm <= options.tolerance) break;
    step *= 2.0;
    bool moved = false;
    while (step > 1e-16) {
      const Vector xn = set.project(x - step * g);
      const Vector dx = xn - x;
      const double fn = saa.value(xn);
      if (std::isfinite(fn) && fn <= fx + g.dot(dx) + dx.squaredNorm() / (2.0 * step)) {
        x = xn;
        fx = fn;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  if (!std::isfinite(fx)) throw NumericalError("sample-average objective is not finite", "local_baseline");
  out.x = x;
  out.value = fx;
  return out;
}

}  // namespace cscgd::oracles
