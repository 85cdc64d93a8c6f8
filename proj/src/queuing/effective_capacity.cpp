#include "cscgd/queuing/effective_capacity.hpp"

#include <cmath>
#include <vector>

#include "cscgd/distributions.hpp"
#include "cscgd/errors.hpp"
#include "cscgd/queuing/bounds.hpp"
#include "cscgd/queuing/mg1_ergodic.hpp"
#include "cscgd/queuing/safeguard.hpp"

namespace cscgd::queuing {

void EffectiveCapacityInstance::validate() const {
  const Eigen::Index n = queues();
  if (n < 1) throw ConfigError("effective_capacity: need at least one queue");
  for (const Vector* v : {&arrival_mean, &arrival_var, &channel_mean, &psi_bar, &phi_bar}) {
    if (v->size() != n) throw ConfigError("effective_capacity: per-queue parameter has the wrong length");
  }
  if ((bandwidth.array() <= 0).any() || (channel_mean.array() <= 0).any()) {
    throw ConfigError("effective_capacity: bandwidths and channel means must be positive");
  }
  if (!arrival_mean.allFinite() || !arrival_var.allFinite() || (arrival_mean.array() <= 0).any() ||
      (arrival_var.array() <= 0).any()) {
    throw ConfigError("effective_capacity: arrival statistics must be finite and positive");
  }
  if (!(p_min > 0) || p_max < p_min) throw ConfigError("effective_capacity: need 0 < P_min <= P_max");
  if (!(delay_target > 0) || !(tail_normalizer > 0)) throw ConfigError("effective_capacity: W and eta must be positive");
}

EffectiveCapacityEval effective_capacity(double u, double v, double arrival_mean, double arrival_var, double margin) {
  const auto inv = safeguarded_inverse(arrival_var + v - u * u, margin);
  EffectiveCapacityEval e;
  e.theta = (u - arrival_mean) * inv.value;
  e.theta_u = inv.value + (u - arrival_mean) * inv.deriv * (-2.0 * u);
  e.theta_v = (u - arrival_mean) * inv.deriv;
  e.alpha = arrival_mean + 0.5 * e.theta * arrival_var;
  e.alpha_u = 0.5 * e.theta_u * arrival_var;
  e.alpha_v = 0.5 * e.theta_v * arrival_var;
  return e;
}

CompositionalProblem effective_capacity_build(const EffectiveCapacityInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.queues();
  CompositionalProblem p;
  p.name = "effective-capacity";
  p.dim_x = n;
  p.dim_g = 2 * n;

  std::vector<Distribution> channel;
  for (Eigen::Index i = 0; i < n; ++i) channel.emplace_back(ExponentialMean{inst.channel_mean[i]});
  p.sample = [channel](RngStream& rng) { return draw_joint(channel, rng); };

  const Vector bw = inst.bandwidth;
  p.inner_g = [bw, n](const Vector& x, const Vector& zeta) {
    Vector out(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double b = ergodic_rate(bw[i], x[i], zeta[i]);
      out[i] = b;
      out[n + i] = b * b;
    }
    return out;
  };
  p.inner_g_jacobian = [bw, n](const Vector& x, const Vector& zeta) {
    Matrix j = Matrix::Zero(n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double b = ergodic_rate(bw[i], x[i], zeta[i]);
      const double db = ergodic_rate_dp(bw[i], x[i], zeta[i]);
      j(i, i) = db;
      j(i, n + i) = 2.0 * b * db;
    }
    return j;
  };

  p.outer_f = [inst, n](const Vector& y) {
    double f = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto e = effective_capacity(y[i], y[n + i], inst.arrival_mean[i], inst.arrival_var[i],
                                        inst.denominator_margin);
      f += -inst.psi_bar[i] * safeguarded_log(e.alpha, inst.log_floor).value +
           inst.phi_bar[i] * inst.tail_normalizer * std::exp(-e.theta * e.alpha * inst.delay_target);
    }
    return f;
  };
  p.outer_f_gradient = [inst, n](const Vector& y) {
    Vector grad(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto e = effective_capacity(y[i], y[n + i], inst.arrival_mean[i], inst.arrival_var[i],
                                        inst.denominator_margin);
      const double dlog = safeguarded_log(e.alpha, inst.log_floor).deriv;
      const double tail = inst.tail_normalizer * std::exp(-e.theta * e.alpha * inst.delay_target);
      const double w = inst.delay_target;
      grad[i] = -inst.psi_bar[i] * dlog * e.alpha_u - inst.phi_bar[i] * tail * w * (e.theta_u * e.alpha + e.theta * e.alpha_u);
      grad[n + i] =
          -inst.psi_bar[i] * dlog * e.alpha_v - inst.phi_bar[i] * tail * w * (e.theta_v * e.alpha + e.theta * e.alpha_v);
    }
    return grad;
  };

  make_unconstrained(p);
  p.feasible_set = FeasibleSet::box(Vector::Constant(n, inst.p_min), Vector::Constant(n, inst.p_max));
  return p;
}

ProblemConstants effective_capacity_constants(const EffectiveCapacityInstance& inst) {
  const Eigen::Index n = inst.queues();
  const CompositionalProblem p = effective_capacity_build(inst);
  ProblemConstants k;
  double cg = 0.0;
  double vg = 0.0;
  Vector lo(2 * n);
  Vector hi(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double b = inst.bandwidth[i];
    cg += (1.0 + 4.0 * b * b) * b * b * std::pow(inst.p_max, 2);
    vg += (1.0 + 4.0 * b * b) * b * b * std::pow(inst.p_max, 4);
    // Rates between the 0.1% and 99.9% channel quantiles over the power range.
    const double z_lo = -inst.channel_mean[i] * std::log1p(-0.001);
    const double z_hi = -inst.channel_mean[i] * std::log(0.001);
    const double b_lo = ergodic_rate(b, inst.p_min, z_lo);
    const double b_hi = ergodic_rate(b, inst.p_max, z_hi);
    lo[i] = b_lo;
    hi[i] = b_hi;
    // Tracked averages satisfy v >= u^2, so sample the excess v - u^2 instead.
    lo[n + i] = 0.0;
    hi[n + i] = b_hi * b_hi;
  }
  auto grad_on_tracked = [&p, n](const Vector& w) {
    Vector y = w;
    for (Eigen::Index i = 0; i < n; ++i) y[n + i] = w[i] * w[i] + w[n + i];
    return p.outer_f_gradient(y);
  };
  k.C_g = cg;
  k.V_g = vg;
  k.C_f = gradient_norm_sq_sup(grad_on_tracked, lo, hi);
  k.C_h = k.V_h = 0.0;
  k.C_q = 0.0;
  k.L_q = 0.0;
  k.D_x = p.feasible_set.diameter_sq();
  return k;
}

}  // namespace cscgd::queuing
