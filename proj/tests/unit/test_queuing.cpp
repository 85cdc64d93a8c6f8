#include <doctest.h>

#include <cmath>
#include <variant>

#include "cscgd/distributions.hpp"
#include "cscgd/errors.hpp"
#include "cscgd/oracles/finite_difference.hpp"
#include "cscgd/oracles/fstar.hpp"
#include "cscgd/queuing/cloud.hpp"
#include "cscgd/queuing/effective_capacity.hpp"
#include "cscgd/queuing/mg1_ergodic.hpp"
#include "cscgd/queuing/mg1_wired.hpp"
#include "cscgd/queuing/mm1.hpp"
#include "cscgd/queuing/outage.hpp"
#include "cscgd/queuing/presets.hpp"
#include "cscgd/queuing/safeguard.hpp"

using namespace cscgd;
using namespace cscgd::queuing;

namespace {

template <class T>
T preset(const std::string& name) {
  return std::get<T>(make_instance(name));
}

}  // namespace

TEST_CASE("wired: f at exact moments equals the deterministic objective") {
  const auto inst = preset<Mg1WiredInstance>("paper-ex1");
  const auto p = mg1_wired_build(inst);
  const Vector el = mg1_wired_length_moment(inst, 1);
  const Vector el2 = mg1_wired_length_moment(inst, 2);
  RngStream rng(3);
  for (int k = 0; k < 50; ++k) {
    Vector lam(3);
    for (Eigen::Index i = 0; i < 3; ++i) lam[i] = 0.1 + 3.0 * rng.uniform();
    Vector y(6);
    y << lam.cwiseProduct(el), lam.cwiseProduct(el2);
    CHECK(p.outer_f(y) == doctest::Approx(oracles::example1_objective(inst, lam)).epsilon(1e-12));
  }
}

TEST_CASE("wired: q is zero when the worst delay equals D_max") {
  auto inst = preset<Mg1WiredInstance>("paper-ex1");
  const auto p = mg1_wired_build(inst);
  const Vector el = mg1_wired_length_moment(inst, 1);
  const Vector el2 = mg1_wired_length_moment(inst, 2);
  // Queue 0 at its delay cap, the others well below it.
  const double c = inst.capacity[0];
  const double cap = 2 * c * c * inst.d_max / (el2[0] + 2 * c * inst.d_max * el[0]);
  Vector lam(3);
  lam << cap, 0.1, 0.1;
  Vector z(6);
  z << lam.cwiseProduct(el), lam.cwiseProduct(el2);
  CHECK(std::abs(p.outer_q(z)[0]) < 1e-12);
  CHECK(mg1_wired_delays(inst, z)[0] == doctest::Approx(inst.d_max));
}

TEST_CASE("wired: D_x is the bounding-box diameter") {
  const auto built = build_preset("paper-ex1");
  CHECK(built.constants.D_x == doctest::Approx(4.9 * 4.9 + 6.9 * 6.9 + 8.9 * 8.9));
}

TEST_CASE("wired: deterministic objective is convex along segments") {
  const auto inst = preset<Mg1WiredInstance>("paper-ex1");
  RngStream rng(11);
  for (int k = 0; k < 2000; ++k) {
    Vector a(3);
    Vector b(3);
    for (Eigen::Index i = 0; i < 3; ++i) {
      a[i] = 0.1 + 4.9 * rng.uniform();
      b[i] = 0.1 + 4.9 * rng.uniform();
    }
    const double t = rng.uniform();
    const double lhs = oracles::example1_objective(inst, t * a + (1 - t) * b);
    const double rhs = t * oracles::example1_objective(inst, a) + (1 - t) * oracles::example1_objective(inst, b);
    CHECK(lhs <= rhs + 1e-9 * std::abs(rhs));
  }
}

TEST_CASE("safeguarded ratio is continuous with continuous partials at the knee") {
  for (double eps : {0.05, 0.5, 0.95}) {
    const double knee = 1 - eps;
    const auto lo = safeguarded_ratio(2.0, knee - 1e-12, eps);
    const auto hi = safeguarded_ratio(2.0, knee + 1e-12, eps);
    CHECK(lo.value == doctest::Approx(hi.value).epsilon(1e-9));
    CHECK(lo.d_x == doctest::Approx(hi.d_x).epsilon(1e-9));
    CHECK(lo.d_y == doctest::Approx(hi.d_y).epsilon(1e-9));
  }
  // Inside the safe region it is the plain ratio.
  CHECK(safeguarded_ratio(3.0, 0.25, 0.5).value == doctest::Approx(4.0));
}

TEST_CASE("safeguarded inverse and log match their originals in the safe region") {
  CHECK(safeguarded_inverse(4.0, 0.1).value == doctest::Approx(0.25));
  CHECK(safeguarded_inverse(0.1 - 1e-13, 0.1).value == doctest::Approx(10.0));
  CHECK(safeguarded_log(2.0, 1e-9).value == doctest::Approx(std::log(2.0)));
  CHECK(safeguarded_log(1e-3 - 1e-15, 1e-3).value == doctest::Approx(std::log(1e-3)));
  CHECK(sigmoid(0.0).value == 0.5);
  CHECK(sigmoid(0.0).deriv == 0.25);
}

TEST_CASE("ergodic: worst-case rate and its derivative") {
  CHECK(ergodic_rate(10, 14, 0.25) == doctest::Approx(10 * std::log(4.5)));
  for (double p : {14.0, 40.0, 90.0}) {
    const double h = 1e-5 * p;
    const double fd = (ergodic_rate(10, p + h, 0.7) - ergodic_rate(10, p - h, 0.7)) / (2 * h);
    CHECK(ergodic_rate_dp(10, p, 0.7) == doctest::Approx(fd).epsilon(1e-8));
    CHECK(ergodic_rate(10, p + 1, 0.7) > ergodic_rate(10, p, 0.7));
  }
}

TEST_CASE("ergodic: C_h follows B / (1 + P_min G)^2") {
  const auto built = build_preset("paper-ex2-k5");
  CHECK(built.constants.C_h == doctest::Approx(10.0 / (4.5 * 4.5)));
  CHECK(built.constants.C_q == 1.0);
}

TEST_CASE("outage: sigmoid indicator approaches the hard indicator as eta grows") {
  // R - b = 30 - 100 log(1 + 10 * 0.03) = 3.76 > 0 and R - b < 0 at zeta = 0.05.
  for (double zeta : {0.03, 0.05}) {
    const double hard = outage_indicator_hard(30, 100, 10, zeta);
    double prev = INFINITY;
    for (double eta : {1.0, 10.0, 100.0}) {
      const double err = std::abs(outage_indicator(eta, 30, 100, 10, zeta) - hard);
      CHECK(err <= prev);
      prev = err;
    }
    CHECK(prev < 1e-6);
  }
  // Saturated: tiny derivative, value pinned to 0 or 1.
  CHECK(outage_indicator(1.0, 30, 100, 100, 5.0) < 1e-100);
  CHECK(std::abs(outage_indicator_dp(1.0, 30, 100, 100, 5.0)) < 1e-100);
}

TEST_CASE("outage: C_g follows N + sum (1 + (B G / (1 + P_min G))^2) / 2") {
  const auto built = build_preset("paper-ex3");
  const double bg = 100 * 0.25 / (1 + 10 * 0.25);
  CHECK(built.constants.C_g == doctest::Approx(3 + 3 * 0.5 * (1 + bg * bg)));
  CHECK(built.constants.C_h == 0.0);
}

TEST_CASE("outage: validation rejects lambda_max above the worst-case throughput") {
  auto inst = preset<OutageInstance>("paper-ex3");
  inst.lambda_max = 40;
  CHECK_THROWS_AS(outage_build(inst), ConfigError);
}

TEST_CASE("effective capacity: theta vanishes when the mean rate equals the arrival mean") {
  const auto e = effective_capacity(10.0, 150.0, 10.0, 20.0, 1e-9);
  CHECK(e.theta == 0.0);
  CHECK(e.alpha == doctest::Approx(10.0));
  // Positive when service outpaces arrivals.
  CHECK(effective_capacity(12.0, 150.0, 10.0, 20.0, 1e-9).theta > 0);
}

TEST_CASE("effective capacity: C_g follows sum (1 + 4 B^2) B^2 P_max^2") {
  const auto built = build_preset("paper-ex4");
  CHECK(built.constants.C_g == doctest::Approx(3 * (1 + 4e4) * 1e4 * 0.81));
  CHECK(built.constants.V_g == doctest::Approx(3 * (1 + 4e4) * 1e4 * 0.81 * 0.81));
}

TEST_CASE("effective capacity: partials of theta and alpha match finite differences") {
  const double h = 1e-6;
  for (double u : {11.0, 13.0}) {
    for (double v : {130.0, 180.0}) {
      const auto e = effective_capacity(u, v, 10, 20, 1e-9);
      const auto up = effective_capacity(u + h, v, 10, 20, 1e-9);
      const auto um = effective_capacity(u - h, v, 10, 20, 1e-9);
      const auto vp = effective_capacity(u, v + h, 10, 20, 1e-9);
      const auto vm = effective_capacity(u, v - h, 10, 20, 1e-9);
      CHECK(e.theta_u == doctest::Approx((up.theta - um.theta) / (2 * h)).epsilon(1e-6));
      CHECK(e.theta_v == doctest::Approx((vp.theta - vm.theta) / (2 * h)).epsilon(1e-6));
      CHECK(e.alpha_u == doctest::Approx((up.alpha - um.alpha) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("cloud: hard blocking is 1/2 for a uniform load on {0, 1, 2}") {
  CloudInstance inst;
  inst.price = Vector::Constant(1, 1.0);
  inst.subscribers = Vector::Constant(1, 1.0);
  inst.load = {Categorical{{0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}}};
  inst.r1_min = 0.5;
  inst.capacity_min = 0.5;
  inst.validate();
  Vector x(2);
  x << 1.0, 1.0;  // r = 1, C = 1
  Vector y = Vector::Zero(3);
  for (double z : {0.0, 1.0, 2.0}) y += cloud_inner(inst, x, Vector::Constant(1, z), true) / 3.0;
  CHECK(cloud_blocking(y)[0] == doctest::Approx(0.5));
  CHECK(y[2] == 1.0);
}

TEST_CASE("cloud: smoothed indicators") {
  const auto inst = preset<CloudInstance>("ex5-demo");
  const Vector x = cloud_decision(Vector::Constant(3, 1.0), 50.0);
  // Total load exactly at capacity: each sigmoid sits at its midpoint.
  const Vector zeta = Vector::Constant(3, 50.0 / 3.0);
  const Vector g = cloud_inner(inst, x, zeta, false);
  CHECK(g[3] == doctest::Approx(0.5));
  // Uncongested: admitted with certainty, never on the blocking edge.
  const Vector light = cloud_inner(inst, x, Vector::Constant(3, 0.01), false);
  CHECK(light[3] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(light[0] < 1e-6);
  const Vector r = cloud_resources(cloud_decision(Vector::LinSpaced(3, 1, 3), 10));
  CHECK(r[2] == doctest::Approx(3.0));
}

TEST_CASE("mm1: closed-form optimum") {
  const double mu = mm1_optimal_mu(1, 1, 1);
  CHECK(mu == doctest::Approx(2 + std::sqrt(2.0)));
  CHECK(std::abs(mm1_utility_derivative(mu, 1, 1, 1)) < 1e-12);
  for (double d : {-1e-3, 1e-3}) CHECK(mm1_utility(mu + d, 1, 1, 1) < mm1_utility(mu, 1, 1, 1));
  double best = -INFINITY;
  double arg = 0;
  for (int k = 0; k <= 100000; ++k) {
    const double m = 1.001 + 10.0 * k / 100000;
    const double u = mm1_utility(m, 1, 1, 1);
    if (u > best) {
      best = u;
      arg = m;
    }
  }
  CHECK(std::abs(arg - mu) < 2e-4);
  CHECK_THROWS_AS(mm1_utility(1.0, 1.0, 1, 1), DomainError);
  CHECK_THROWS_AS(mm1_utility_derivative(0.5, 1.0, 1, 1), DomainError);
}

TEST_CASE("presets: unknown names and keys are rejected") {
  CHECK_THROWS_AS(make_instance("nope"), ConfigError);
  CHECK_THROWS_AS(make_instance("paper-ex1", {{"no_such_field", 1}}), ConfigError);
  CHECK(std::get<ToyQuadraticInstance>(make_instance("toy-quadratic", {{"level", 0.9}})).level == 0.9);
}

TEST_CASE("presets: analytic derivatives agree with finite differences") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto built = build_preset(name);
    RngStream rng(0xfd, 1);
    for (const auto& r : oracles::gradient_suite(built.problem, 100, rng)) {
      CAPTURE(r.map);
      CHECK(r.max_rel_err < 1e-5);
    }
  }
}
