#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "cscgd/errors.hpp"
#include "cscgd/feasible_set.hpp"
#include "cscgd/penalty.hpp"
#include "cscgd/problem.hpp"
#include "cscgd/solver.hpp"
#include "cscgd/step_schedule.hpp"

using namespace cscgd;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// g = x, f = |y|^2 / 2, h = 0, no constraint, Box[-1, 1]^n.
CompositionalProblem quadratic(Eigen::Index n = 1) {
  CompositionalProblem p;
  p.name = "quadratic";
  p.dim_x = n;
  p.dim_g = n;
  p.sample = [](RngStream& rng) { return Vector::Constant(1, rng.uniform()).eval(); };
  p.inner_g = [](const Vector& x, const Vector&) { return x; };
  p.inner_g_jacobian = [n](const Vector&, const Vector&) { return Matrix::Identity(n, n).eval(); };
  p.outer_f = [](const Vector& y) { return 0.5 * y.squaredNorm(); };
  p.outer_f_gradient = [](const Vector& y) { return y; };
  make_unconstrained(p);
  p.feasible_set = FeasibleSet::box(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0));
  return p;
}

}  // namespace

TEST_CASE("penalty value branches") {
  PenaltyParams p{0.0, 1.0};
  CHECK(penalty_value(vec({-1.0}), p) == 0.0);
  CHECK(penalty_value(vec({2.0}), PenaltyParams{0.0, 2.0}) == doctest::Approx(2.0));
  CHECK(penalty_value(vec({0.0}), PenaltyParams{0.1, 1.0}) == doctest::Approx(0.005));
  // Linear branch: C x - C^2 / 2.
  CHECK(penalty_value(vec({3.0}), PenaltyParams{0.0, 1.0}) == doctest::Approx(2.5));
  CHECK(penalty_value(vec({-0.2, 0.5}), PenaltyParams{0.0, 1.0}) == doctest::Approx(0.125));
}

TEST_CASE("penalty gradient is clamp(x, 0, C)") {
  CHECK(penalty_gradient(vec({-0.5}), PenaltyParams{0.0, 1.0})[0] == 0.0);
  CHECK(penalty_gradient(vec({0.3}), PenaltyParams{0.0, 1.0})[0] == doctest::Approx(0.3));
  CHECK(penalty_gradient(vec({5.0}), PenaltyParams{0.0, 1.0})[0] == doctest::Approx(1.0));
  const double h = 1e-6;
  for (double x : {0.3, 5.0, -0.5}) {
    const PenaltyParams p{0.0, 1.0};
    const double fd = (penalty_value(vec({x + h}), p) - penalty_value(vec({x - h}), p)) / (2 * h);
    CHECK(penalty_gradient(vec({x}), p)[0] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("penalty rejects bad input") {
  CHECK_THROWS_AS(penalty_value(vec({NAN}), PenaltyParams{}), NumericalError);
  CHECK_THROWS_AS(PenaltyParams({1.0, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(PenaltyParams({-0.1, 1.0}).validate(), ConfigError);
}

TEST_CASE("projection examples") {
  const auto box = FeasibleSet::box(Vector::Zero(2), Vector::Ones(2));
  CHECK(box.project(vec({2.0, -1.0})).isApprox(vec({1.0, 0.0})));
  CHECK(box.project(vec({0.25, 0.5})) == vec({0.25, 0.5}));
  const auto capped = FeasibleSet::box_with_sum_cap(Vector::Zero(2), Vector::Constant(2, 10.0), 1.0);
  const Vector u = capped.project(vec({1.0, 1.0}));
  CHECK(u[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(u[1] == doctest::Approx(0.5).epsilon(1e-9));
  // Brute force over a fine grid of the feasible triangle.
  double best = 1e300;
  Vector arg(2);
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; i + j <= 400; ++j) {
      const Vector c = vec({i / 400.0, j / 400.0});
      const double d = (c - vec({1.3, 0.2})).squaredNorm();
      if (d < best) {
        best = d;
        arg = c;
      }
    }
  }
  CHECK((capped.project(vec({1.3, 0.2})) - arg).norm() < 2.0 / 400.0);
}

TEST_CASE("product projection is blockwise") {
  const auto set = FeasibleSet::product(
      {FeasibleSet::box(Vector::Zero(1), Vector::Ones(1)),
       FeasibleSet::box_with_sum_cap(Vector::Zero(2), Vector::Constant(2, 10.0), 1.0)});
  const Vector p = set.project(vec({3.0, 1.0, 1.0}));
  CHECK(p[0] == 1.0);
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(p[2] == doctest::Approx(0.5));
  CHECK(set.dim() == 3);
  CHECK(set.diameter_sq() == doctest::Approx(1.0 + 200.0));
}

TEST_CASE("empty sets are configuration errors") {
  CHECK_THROWS_AS(FeasibleSet::box(Vector::Ones(1), Vector::Zero(1)), ConfigError);
  CHECK_THROWS_AS(FeasibleSet::box_with_sum_cap(Vector::Ones(2), Vector::Constant(2, 2.0), 1.0), ConfigError);
}

TEST_CASE("step sizes") {
  const StepSchedule dim(0.75, 0.5, 0.6, StepRegime::Diminishing, 100);
  const auto s1 = dim.at(1);
  CHECK(s1.alpha == 1.0);
  CHECK(s1.beta == 1.0);
  CHECK(s1.delta == 1.0);
  CHECK(dim.at(16).alpha == doctest::Approx(0.125));
  const StepSchedule con(0.9167, 0.5, 0.75, StepRegime::Constant, 10000);
  const auto s = con.at(37);
  CHECK(s.alpha == doctest::Approx(std::pow(1e4, -0.9167)));
  CHECK(s.beta == doctest::Approx(0.01));
  CHECK(s.delta == doctest::Approx(1e-3));
  CHECK_THROWS_AS(StepSchedule(0.5, 0.6, 0.55, StepRegime::Constant, 10), ConfigError);
  CHECK_THROWS_AS(StepSchedule(1.0, 0.5, 0.6, StepRegime::Constant, 10), ConfigError);
  CHECK_THROWS_AS(StepSchedule(0.7, 0.5, 0.8, StepRegime::Constant, 10), ConfigError);
  CHECK(con.tail_start() == 5000);
  CHECK(StepSchedule(0.75, 0.5, 0.6, StepRegime::Constant, 7).tail_start() == 4);
}

TEST_CASE("pure tracking leaves x fixed") {
  const auto p = quadratic();
  SolverConfig cfg;
  cfg.schedule = StepSchedule(0.75, 0.5, 0.75, StepRegime::Constant, 50);
  cfg.initial_x = vec({0.5});
  cfg.options.update_x = false;
  const auto res = run(p, cfg);
  for (const auto& r : res.trajectory) {
    CHECK(r.x[0] == 0.5);
    CHECK(r.alpha == 0.0);
    CHECK(r.delta == 0.0);
    CHECK(r.step_sq_norm == 0.0);
  }
  CHECK(res.x_hat[0] == 0.5);
}

TEST_CASE("deterministic quadratic matches scalar gradient descent") {
  const auto p = quadratic();
  SolverConfig cfg;
  cfg.schedule = StepSchedule(0.75, 0.5, 0.75, StepRegime::Diminishing, 200);
  cfg.initial_x = vec({1.0});
  cfg.cadence = LogCadence::Every;
  const auto res = run(p, cfg);
  // Scalar recursion: y_{t+1} = (1 - beta_t) y_t + beta_t x_t, x_{t+1} = clamp(x_t - alpha_t y_{t+1}).
  double x = 1.0;
  double y = 1.0;
  for (const auto& r : res.trajectory) {
    const double t = static_cast<double>(r.t);
    const double beta = std::pow(t, -0.5);
    y = (1 - beta) * y + beta * x;
    x = std::clamp(x - std::pow(t, -0.75) * y, -1.0, 1.0);
    CHECK(r.x[0] == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("quadratic converges to zero") {
  const auto p = quadratic();
  SolverConfig cfg;
  cfg.schedule = StepSchedule(0.75, 0.5, 0.75, StepRegime::Diminishing, 10000);
  cfg.initial_x = vec({1.0});
  const auto res = run(p, cfg);
  CHECK(std::abs(res.x_hat[0]) < 1e-2);
}

TEST_CASE("tail average over ceil(T/2)..T") {
  const auto p = quadratic();
  SolverConfig cfg;
  cfg.schedule = StepSchedule(0.75, 0.5, 0.75, StepRegime::Constant, 2);
  cfg.initial_x = vec({1.0});
  cfg.cadence = LogCadence::Every;
  const auto res = run(p, cfg);
  REQUIRE(res.trajectory.size() == 2);
  const double x1 = 1.0;
  const double x2 = res.trajectory[0].x[0];
  CHECK(res.x_hat[0] == doctest::Approx((x1 + x2) / 2));
  CHECK(res.final_state.tail_count == 2);
  CHECK_THROWS_AS(run(p, [&] {
                    auto c = cfg;
                    c.schedule = StepSchedule(0.75, 0.5, 0.75, StepRegime::Constant, 1);
                    return c;
                  }()),
                  ConfigError);
}

TEST_CASE("non-finite maps are reported by name") {
  auto p = quadratic();
  p.outer_f_gradient = [](const Vector& y) { return Vector::Constant(y.size(), NAN).eval(); };
  SolverConfig cfg;
  cfg.schedule = StepSchedule(0.75, 0.5, 0.75, StepRegime::Constant, 10);
  try {
    run(p, cfg);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.source() == "outer_f_gradient");
    CHECK(e.iteration() == 1);
  }
}

TEST_CASE("logging cadence") {
  CHECK(logged_iterations(500, LogCadence::Auto).size() == 500);
  const auto big = logged_iterations(1000000, LogCadence::Auto);
  CHECK(big.size() == 1000);
  CHECK(std::adjacent_find(big.begin(), big.end(), std::greater_equal<>()) == big.end());
  CHECK(big.front() == 1);
  CHECK(big.back() == 1000000);
  CHECK(logged_iterations(20000, LogCadence::Every).size() == 20000);
}

TEST_CASE("step-size bound diagnostic") {
  const auto p = quadratic();
  SolverConfig cfg;
  cfg.schedule = StepSchedule(0.75, 0.5, 0.75, StepRegime::Constant, 100);
  cfg.options.update_x = false;
  std::vector<std::vector<TrajectoryRecord>> runs{run(p, cfg).trajectory};
  CHECK(lemma4_diagnostic(runs, {1, 1, 0, 0, 1, 0}).violations == 0);
  // C_f C_g = 1 bounds |x - x'|^2 <= alpha^2 |x|^2 <= 2 alpha^2.
  cfg.options.update_x = true;
  cfg.initial_x = vec({1.0});
  runs = {run(p, cfg).trajectory};
  CHECK(lemma4_diagnostic(runs, {1, 1, 0, 0, 1, 0}).violations == 0);
  CHECK(lemma4_diagnostic(runs, {1e-3, 1e-3, 0, 0, 1, 0}).violations > 0);
}

TEST_CASE("shape checks name the offending map") {
  auto p = quadratic(2);
  RngStream rng(1);
  check_shapes(p, rng);
  p.inner_g_jacobian = [](const Vector&, const Vector&) { return Matrix::Identity(3, 2).eval(); };
  CHECK_THROWS_WITH_AS(check_shapes(p, rng), doctest::Contains("inner_g_jacobian"), ConfigError);
}

TEST_CASE("zero-violation margin") {
  ProblemConstants k;
  k.C_f = 3;
  k.C_g = 3;
  k.D_x = 3;
  const StepSchedule s(0.9167, 0.5, 0.75, StepRegime::Constant, 1000);
  const double e = 0.75 - 0.9167;
  CHECK(zero_violation_gamma(k, s, 1) == doctest::Approx(std::sqrt(std::pow(1000.0, e) * 9 / std::pow(2.0, e))));
  CHECK(zero_violation_gamma(k, s, 2, 1.0) ==
        doctest::Approx(std::sqrt(2 * std::pow(1000.0, e) * 10 / std::pow(2.0, e))));
  // The margin shrinks with the horizon when a > c.
  CHECK(zero_violation_gamma(k, StepSchedule(0.9167, 0.5, 0.75, StepRegime::Constant, 1000000), 1) <
        zero_violation_gamma(k, s, 1));
  k.D_x = ProblemConstants::kUnknown;
  CHECK_THROWS_AS(zero_violation_gamma(k, s, 1), ConfigError);
}
