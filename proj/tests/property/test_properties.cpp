#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "cscgd/feasible_set.hpp"
#include "cscgd/penalty.hpp"
#include "cscgd/problem.hpp"
#include "cscgd/queuing/safeguard.hpp"
#include "cscgd/solver.hpp"
#include "cscgd/step_schedule.hpp"

using namespace cscgd;

namespace {

constexpr int kTrials = 10000;

Vector uniform(RngStream& rng, Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = lo + (hi - lo) * rng.uniform();
  return v;
}

// A random box, box with an active-able sum cap, or a product of the two.
FeasibleSet random_set(RngStream& rng) {
  auto box_bounds = [&](Eigen::Index n, Vector& lo, Vector& hi) {
    lo = uniform(rng, n, -2, 1);
    hi = lo + uniform(rng, n, 0, 3);
  };
  const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform() * 4);
  Vector lo;
  Vector hi;
  box_bounds(n, lo, hi);
  const double cap = lo.sum() + rng.uniform() * (hi - lo).sum();
  switch (static_cast<int>(rng.uniform() * 3)) {
    case 0:
      return FeasibleSet::box(lo, hi);
    case 1:
      return FeasibleSet::box_with_sum_cap(lo, hi, cap);
    default: {
      Vector lo2;
      Vector hi2;
      box_bounds(2, lo2, hi2);
      return FeasibleSet::product({FeasibleSet::box_with_sum_cap(lo, hi, cap), FeasibleSet::box(lo2, hi2)});
    }
  }
}

Vector random_point_near(const FeasibleSet& set, RngStream& rng) {
  const Vector lo = set.lower();
  const Vector hi = set.upper();
  Vector v(lo.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double w = hi[i] - lo[i] + 1.0;
    v[i] = lo[i] - w + 3 * w * rng.uniform();
  }
  return v;
}

}  // namespace

TEST_CASE("projection: membership, idempotence, nonexpansiveness, obtuse angle") {
  RngStream rng(0x9a0);
  for (int k = 0; k < kTrials; ++k) {
    const FeasibleSet set = random_set(rng);
    const Vector u = random_point_near(set, rng);
    const Vector v = random_point_near(set, rng);
    const Vector pu = set.project(u);
    const Vector pv = set.project(v);
    REQUIRE(set.contains(pu, 1e-9));
    CHECK((set.project(pu) - pu).norm() <= 1e-9);
    CHECK((pu - pv).norm() <= (u - v).norm() + 1e-9);
    // Variational inequality against another feasible point.
    CHECK((u - pu).dot(pv - pu) <= 1e-8);
  }
}

TEST_CASE("penalty: nonnegative, zero exactly on the feasible side, convex") {
  RngStream rng(0x9e1);
  for (int k = 0; k < kTrials; ++k) {
    const double c_ell = 0.1 + 4 * rng.uniform();
    const PenaltyParams p{0.9 * c_ell * rng.uniform(), c_ell};
    const Eigen::Index j = 1 + static_cast<Eigen::Index>(rng.uniform() * 3);
    const Vector a = uniform(rng, j, -3 * c_ell, 3 * c_ell);
    const Vector b = uniform(rng, j, -3 * c_ell, 3 * c_ell);
    const double t = rng.uniform();
    const double la = penalty_value(a, p);
    const double lb = penalty_value(b, p);
    CHECK(la >= 0.0);
    CHECK((la == 0.0) == ((a.array() + p.gamma).maxCoeff() <= 0.0));
    CHECK(penalty_value(t * a + (1 - t) * b, p) <= t * la + (1 - t) * lb + 1e-12);
  }
}

TEST_CASE("penalty: gradient matches centered differences away from kinks") {
  RngStream rng(0x9e2);
  const double h = 1e-6;
  int checked = 0;
  for (int k = 0; k < kTrials; ++k) {
    const double c_ell = 0.1 + 4 * rng.uniform();
    const PenaltyParams p{0.5 * c_ell * rng.uniform(), c_ell};
    const Vector w = uniform(rng, 2, -3 * c_ell, 3 * c_ell);
    const Vector s = w.array() + p.gamma;
    if ((s.array().abs() < 1e-4).any() || ((s.array() - c_ell).abs() < 1e-4).any()) continue;
    ++checked;
    const Vector g = penalty_gradient(w, p);
    for (Eigen::Index i = 0; i < 2; ++i) {
      Vector up = w;
      Vector dn = w;
      up[i] += h;
      dn[i] -= h;
      const double fd = (penalty_value(up, p) - penalty_value(dn, p)) / (2 * h);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      CHECK(g[i] >= 0.0);
      CHECK(g[i] <= c_ell);
    }
  }
  CHECK(checked > kTrials / 2);
}

TEST_CASE("step sizes: ordering and monotone ratios") {
  RngStream rng(0x57e);
  for (int k = 0; k < kTrials; ++k) {
    const double b = 0.05 + 0.9 * rng.uniform();
    const double c = b + (0.99 - b) * rng.uniform();
    const double a = c + (0.999 - c) * rng.uniform();
    const auto regime = rng.uniform() < 0.5 ? StepRegime::Diminishing : StepRegime::Constant;
    const std::int64_t horizon = 2 + static_cast<std::int64_t>(rng.uniform() * 1e6);
    const StepSchedule s(a, b, c, regime, horizon);
    const std::int64_t t = 1 + static_cast<std::int64_t>(rng.uniform() * (horizon - 1));
    const auto now = s.at(t);
    const auto next = s.at(t + 1);
    CHECK(now.alpha <= now.delta);
    CHECK(now.delta <= now.beta);
    CHECK(now.beta <= 1.0);
    CHECK(next.alpha <= now.alpha);
    CHECK(next.alpha / next.beta <= now.alpha / now.beta * (1 + 1e-12));
    CHECK(next.delta / next.beta <= now.delta / now.beta * (1 + 1e-12));
  }
}

TEST_CASE("safeguards agree with the plain formulas on the safe region") {
  RngStream rng(0x5af);
  for (int k = 0; k < kTrials; ++k) {
    const double eps = 0.01 + 0.98 * rng.uniform();
    const double x = 10 * rng.uniform() - 5;
    const double y = -5 + (1 - eps + 5) * rng.uniform();
    if (y >= 1 - eps) continue;
    const auto r = queuing::safeguarded_ratio(x, y, eps);
    CHECK(r.value == doctest::Approx(x / (1 - y)).epsilon(1e-14));
    const double d = eps + 10 * rng.uniform();
    CHECK(queuing::safeguarded_inverse(d, eps).value == 1 / d);
    CHECK(queuing::safeguarded_log(d, eps).value == std::log(d));
  }
}

TEST_CASE("solver: every logged iterate and the tail average are feasible") {
  RngStream rng(0x501);
  for (int k = 0; k < kTrials; ++k) {
    const FeasibleSet set = random_set(rng);
    const Eigen::Index n = set.dim();
    const Vector target = random_point_near(set, rng);
    const double level = set.lower().sum() + rng.uniform() * (set.upper() - set.lower()).sum();
    CompositionalProblem p;
    p.name = "random-quadratic";
    p.dim_x = n;
    p.dim_g = n;
    p.dim_h = n;
    p.num_constraints = 1;
    p.sample = [n](RngStream& r) { return Vector::Constant(n, r.uniform() - 0.5).eval(); };
    p.inner_g = [](const Vector& x, const Vector& z) { return (x + z).eval(); };
    p.inner_g_jacobian = [n](const Vector&, const Vector&) { return Matrix::Identity(n, n).eval(); };
    p.inner_h = p.inner_g;
    p.inner_h_jacobian = p.inner_g_jacobian;
    p.outer_f = [target](const Vector& y) { return 0.5 * (y - target).squaredNorm(); };
    p.outer_f_gradient = [target](const Vector& y) { return (y - target).eval(); };
    p.outer_q = [level](const Vector& z) { return Vector::Constant(1, z.sum() - level).eval(); };
    p.outer_q_jacobian = [n](const Vector&) { return Matrix::Ones(n, 1).eval(); };
    p.feasible_set = set;
    SolverConfig cfg;
    cfg.schedule = StepSchedule(0.5, 0.25, 0.5, StepRegime::Diminishing, 20);
    cfg.penalty = PenaltyParams{0.0, 2.0};
    cfg.seed = static_cast<std::uint64_t>(k);
    cfg.cadence = LogCadence::Every;
    const auto res = run(p, cfg);
    bool inside = set.contains(res.x_hat, 1e-9);
    for (const auto& r : res.trajectory) inside = inside && set.contains(r.x, 1e-9);
    CHECK(inside);
  }
}
