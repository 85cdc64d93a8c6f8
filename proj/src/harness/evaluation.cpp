#include "cscgd/harness/evaluation.hpp"

#include <cmath>
#include <limits>

#include "cscgd/errors.hpp"

namespace cscgd::harness {

Evaluation evaluate(const CompositionalProblem& p, const Vector& x, std::int64_t batch, RngStream& rng) {
  if (batch < 2) throw ConfigError("evaluation batch must be at least 2");
  const bool constrained = p.num_constraints > 0;
  Vector sg = Vector::Zero(p.dim_g);
  Vector sh = Vector::Zero(p.dim_h);
  Matrix cg = Matrix::Zero(p.dim_g, p.dim_g);
  Matrix ch = Matrix::Zero(p.dim_h, p.dim_h);
  // Shifted sums keep the covariance accurate when means are large.
  Vector g0, h0;
  for (std::int64_t s = 0; s < batch; ++s) {
    const Vector zeta = p.sample(rng);
    Vector g = p.inner_g(x, zeta);
    if (s == 0) g0 = g;
    g -= g0;
    sg += g;
    cg.noalias() += g * g.transpose();
    if (constrained) {
      Vector h = p.inner_h(x, zeta);
      if (s == 0) h0 = h;
      h -= h0;
      sh += h;
      ch.noalias() += h * h.transpose();
    }
  }
  const double n = static_cast<double>(batch);
  Evaluation e;
  const Vector dg = sg / n;
  e.mean_g = g0 + dg;
  const Matrix cov_g = (cg - n * dg * dg.transpose()) / (n - 1.0);
  e.se_g = (cov_g.diagonal().cwiseMax(0.0) / n).cwiseSqrt();
  e.F = p.outer_f(e.mean_g);
  const Vector grad = p.outer_f_gradient(e.mean_g);
  e.F_se = std::sqrt(std::max(0.0, grad.dot(cov_g * grad)) / n);

  e.max_Q = -std::numeric_limits<double>::infinity();
  if (constrained) {
    const Vector dh = sh / n;
    e.mean_h = h0 + dh;
    const Matrix cov_h = (ch - n * dh * dh.transpose()) / (n - 1.0);
    e.se_h = (cov_h.diagonal().cwiseMax(0.0) / n).cwiseSqrt();
    e.Q = p.outer_q(e.mean_h);
    const Matrix jq = p.outer_q_jacobian(e.mean_h);
    e.Q_se.resize(e.Q.size());
    for (Eigen::Index j = 0; j < e.Q.size(); ++j) {
      const Vector col = jq.col(j);
      e.Q_se[j] = std::sqrt(std::max(0.0, col.dot(cov_h * col)) / n);
    }
    Eigen::Index k = 0;
    e.max_Q = e.Q.maxCoeff(&k);
    e.max_Q_se = e.Q_se[k];
  } else {
    e.mean_h = Vector::Zero(p.dim_h);
    e.se_h = Vector::Zero(p.dim_h);
    e.Q = Vector(0);
    e.Q_se = Vector(0);
  }
  return e;
}

}  // namespace cscgd::harness
