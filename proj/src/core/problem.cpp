#include "cscgd/problem.hpp"

#include <string>

#include "cscgd/errors.hpp"

namespace cscgd {

void CompositionalProblem::validate() const {
  if (dim_x <= 0 || dim_g <= 0 || dim_h <= 0 || num_constraints < 0) {
    throw ConfigError("problem '" + name + "' has invalid dimensions");
  }
  if (!sample || !inner_g || !inner_g_jacobian || !inner_h || !inner_h_jacobian || !outer_f ||
      !outer_f_gradient || !outer_q || !outer_q_jacobian) {
    throw ConfigError("problem '" + name + "' is missing a map");
  }
  if (feasible_set.dim() != dim_x) {
    throw ConfigError("problem '" + name + "' feasible set dimension differs from dim_x");
  }
}

namespace {

void expect_shape(const std::string& map, Eigen::Index rows, Eigen::Index cols, Eigen::Index want_rows,
                  Eigen::Index want_cols) {
  if (rows != want_rows || cols != want_cols) {
    throw ConfigError(map + " returned shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                      ", expected " + std::to_string(want_rows) + "x" + std::to_string(want_cols));
  }
}

}  // namespace

void check_shapes(const CompositionalProblem& problem, RngStream& rng, int draws) {
  problem.validate();
  const Vector lo = problem.feasible_set.lower();
  const Vector hi = problem.feasible_set.upper();
  for (int k = 0; k < draws; ++k) {
    Vector x(problem.dim_x);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = lo[i] + rng.uniform() * (hi[i] - lo[i]);
    x = problem.feasible_set.project(x);
    const Vector zeta = problem.sample(rng);
    const Vector g = problem.inner_g(x, zeta);
    const Vector h = problem.inner_h(x, zeta);
    expect_shape("inner_g", g.rows(), 1, problem.dim_g, 1);
    expect_shape("inner_h", h.rows(), 1, problem.dim_h, 1);
    const Matrix jg = problem.inner_g_jacobian(x, zeta);
    const Matrix jh = problem.inner_h_jacobian(x, zeta);
    expect_shape("inner_g_jacobian", jg.rows(), jg.cols(), problem.dim_x, problem.dim_g);
    expect_shape("inner_h_jacobian", jh.rows(), jh.cols(), problem.dim_x, problem.dim_h);
    const Vector fg = problem.outer_f_gradient(g);
    expect_shape("outer_f_gradient", fg.rows(), 1, problem.dim_g, 1);
    const Vector q = problem.outer_q(h);
    expect_shape("outer_q", q.rows(), 1, problem.num_constraints, 1);
    const Matrix jq = problem.outer_q_jacobian(h);
    expect_shape("outer_q_jacobian", jq.rows(), jq.cols(), problem.dim_h, problem.num_constraints);
  }
}

void make_unconstrained(CompositionalProblem& problem) {
  const Eigen::Index n = problem.dim_x;
  problem.dim_h = 1;
  problem.num_constraints = 0;
  problem.inner_h = [](const Vector&, const Vector&) { return Vector::Zero(1); };
  problem.inner_h_jacobian = [n](const Vector&, const Vector&) { return Matrix::Zero(n, 1); };
  problem.outer_q = [](const Vector&) { return Vector(0); };
  problem.outer_q_jacobian = [](const Vector&) { return Matrix(1, 0); };
}

}  // namespace cscgd
