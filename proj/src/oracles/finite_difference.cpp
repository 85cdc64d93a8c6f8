#include "cscgd/oracles/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cscgd::oracles {

FdReport finite_difference_check(const std::function<Vector(const Vector&)>& map,
                                 const std::function<Matrix(const Vector&)>& jacobian, const Vector& point,
                                 double h, const std::function<double(const Vector&)>& kink_distance) {
  FdReport report;
  if (kink_distance && kink_distance(point) < 10.0 * h) {
    report.skipped = true;
    report.reason = "skipped: kink proximity";
    return report;
  }
  const Matrix analytic = jacobian(point);
  const Eigen::Index n = point.size();
  const Eigen::Index m = analytic.cols();
  Matrix fd(n, m);
  Matrix noise(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double step = h * std::max(1.0, std::abs(point[i]));
    Vector up = point;
    Vector dn = point;
    up[i] += step;
    dn[i] -= step;
    const Vector mu = map(up);
    const Vector md = map(dn);
    fd.row(i) = ((mu - md) / (2.0 * step)).transpose();
    // Rounding in mu - md, a few ulps of the larger output, over 2 step.
    noise.row(i) = (8.0 * std::numeric_limits<double>::epsilon() * mu.cwiseAbs().cwiseMax(md.cwiseAbs()) /
                    (2.0 * step)).transpose();
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    const double col_scale = fd.col(j).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double denom = std::max({std::abs(analytic(i, j)), std::abs(fd(i, j)), 1e-8 * col_scale, 1e-300});
      const double err = std::max(0.0, std::abs(analytic(i, j) - fd(i, j)) - noise(i, j)) / denom;
      if (err > report.max_rel_err) {
        report.max_rel_err = err;
        report.worst_input = i;
        report.worst_output = j;
      }
    }
  }
  return report;
}

FdReport finite_difference_check(const std::function<double(const Vector&)>& fn,
                                 const std::function<Vector(const Vector&)>& gradient, const Vector& point, double h,
                                 const std::function<double(const Vector&)>& kink_distance) {
  return finite_difference_check([&](const Vector& x) { return Vector::Constant(1, fn(x)).eval(); },
                                 [&](const Vector& x) { return Matrix(gradient(x)); }, point, h, kink_distance);
}

std::vector<GradientSuiteReport> gradient_suite(const CompositionalProblem& problem, int points, RngStream& rng,
                                                double h) {
  std::vector<GradientSuiteReport> out{{"inner_g"}, {"inner_h"}, {"outer_f"}, {"outer_q"}};
  const Vector lo = problem.feasible_set.lower();
  const Vector hi = problem.feasible_set.upper();
  const Vector centre = problem.feasible_set.center();
  auto record = [](GradientSuiteReport& r, const FdReport& fd) {
    ++r.points;
    if (fd.skipped) {
      ++r.skipped;
      return;
    }
    r.max_rel_err = std::max(r.max_rel_err, fd.max_rel_err);
  };
  for (int s = 0; s < points; ++s) {
    Vector x(lo.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform();
    x = problem.feasible_set.project(x);
    x = 0.95 * x + 0.05 * centre;
    const Vector zeta = problem.sample(rng);
    record(out[0], finite_difference_check([&](const Vector& v) { return problem.inner_g(v, zeta); },
                                           [&](const Vector& v) { return problem.inner_g_jacobian(v, zeta); }, x, h));
    record(out[1], finite_difference_check([&](const Vector& v) { return problem.inner_h(v, zeta); },
                                           [&](const Vector& v) { return problem.inner_h_jacobian(v, zeta); }, x, h));
    Vector y = Vector::Zero(problem.dim_g);
    Vector z = Vector::Zero(problem.dim_h);
    constexpr int kAvg = 64;
    for (int r = 0; r < kAvg; ++r) {
      const Vector zr = problem.sample(rng);
      y += problem.inner_g(x, zr) / kAvg;
      z += problem.inner_h(x, zr) / kAvg;
    }
    record(out[2], finite_difference_check(problem.outer_f, problem.outer_f_gradient, y, h));
    if (problem.num_constraints > 0) {
      record(out[3], finite_difference_check(problem.outer_q, problem.outer_q_jacobian, z, h));
    }
  }
  return out;
}

}  // namespace cscgd::oracles
