#include "cscgd/queuing/outage.hpp"

#include <cmath>
#include <vector>

#include "cscgd/distributions.hpp"
#include "cscgd/errors.hpp"
#include "cscgd/queuing/bounds.hpp"
#include "cscgd/queuing/mg1_ergodic.hpp"
#include "cscgd/queuing/safeguard.hpp"

namespace cscgd::queuing {

namespace {

// Waiting time w = (1 + rho)/(2R) * A * B with A = 1/(1 - rho), u = lambda A / R,
// B = u / (1 - u); each ratio goes through the safeguard.
struct WaitEval {
  double value;
  double d_rho;
  double d_lambda;
};

WaitEval waiting_time(double rate, double rho, double lambda, double margin) {
  const auto a = safeguarded_ratio(1.0, rho, margin);
  const double u = lambda * a.value / rate;
  const auto bu = safeguarded_ratio(u, u, margin);
  const double db = bu.d_x + bu.d_y;
  const double k = (1.0 + rho) / (2.0 * rate);
  WaitEval w;
  w.value = k * a.value * bu.value;
  w.d_lambda = k * a.value * db * a.value / rate;
  w.d_rho = (a.value * bu.value + (1.0 + rho) * a.d_y * bu.value + (1.0 + rho) * a.value * db * lambda * a.d_y / rate) /
            (2.0 * rate);
  return w;
}

}  // namespace

void OutageInstance::validate() const {
  const Eigen::Index n = queues();
  if (n < 1) throw ConfigError("outage: need at least one queue");
  if (rate.size() != n || psi_bar.size() != n || phi_bar.size() != n) {
    throw ConfigError("outage: per-queue parameter has the wrong length");
  }
  if ((bandwidth.array() <= 0).any() || (rate.array() <= 0).any()) {
    throw ConfigError("outage: bandwidths and rates must be positive");
  }
  if (!(eta >= 1.0)) throw ConfigError("outage: sigmoid sharpness must be at least 1");
  if (!(p_min > 0) || n * p_min > p_max) throw ConfigError("outage: need 0 < P_min and N P_min <= P_max");
  if (!(lambda_min > 0) || lambda_max < lambda_min || lambda_lim < n * lambda_min) {
    throw ConfigError("outage: invalid arrival-rate bounds");
  }
  if (!(channel_mean > 0) || !(channel_floor > 0)) throw ConfigError("outage: invalid channel distribution");
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r_worst = outage_indicator(eta, rate[i], bandwidth[i], p_min, channel_floor);
    if (capacity_margin * rate[i] * (1.0 - r_worst) < lambda_max) {
      throw ConfigError("outage: lambda_max exceeds the worst-case service throughput");
    }
  }
}

double outage_indicator(double eta, double rate, double bandwidth, double p, double zeta) {
  return sigmoid(eta * (rate - ergodic_rate(bandwidth, p, zeta))).value;
}

double outage_indicator_dp(double eta, double rate, double bandwidth, double p, double zeta) {
  return -eta * sigmoid(eta * (rate - ergodic_rate(bandwidth, p, zeta))).deriv * ergodic_rate_dp(bandwidth, p, zeta);
}

double outage_indicator_hard(double rate, double bandwidth, double p, double zeta) {
  return rate >= ergodic_rate(bandwidth, p, zeta) ? 1.0 : 0.0;
}

double outage_waiting_time(double rate, double rho, double lambda, double margin) {
  return waiting_time(rate, rho, lambda, margin).value;
}

CompositionalProblem outage_build(const OutageInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.queues();
  CompositionalProblem p;
  p.name = "outage";
  p.dim_x = 2 * n;
  p.dim_g = 2 * n;

  std::vector<Distribution> channel(static_cast<std::size_t>(n),
                                    TruncatedExponential{inst.channel_mean, INFINITY, inst.channel_floor});
  p.sample = [channel](RngStream& rng) { return draw_joint(channel, rng); };

  p.inner_g = [inst, n](const Vector& x, const Vector& zeta) {
    Vector out(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      out[i] = outage_indicator(inst.eta, inst.rate[i], inst.bandwidth[i], x[n + i], zeta[i]);
      out[n + i] = x[i];
    }
    return out;
  };
  p.inner_g_jacobian = [inst, n](const Vector& x, const Vector& zeta) {
    Matrix j = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      j(n + i, i) = outage_indicator_dp(inst.eta, inst.rate[i], inst.bandwidth[i], x[n + i], zeta[i]);
      j(i, n + i) = 1.0;
    }
    return j;
  };

  p.outer_f = [inst, n](const Vector& y) {
    double f = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = inst.rate[i];
      f += inst.phi_bar[i] * waiting_time(r, y[i], y[n + i], inst.denominator_margin).value -
           inst.psi_bar[i] * safeguarded_log(r * (1.0 - y[i]), inst.log_floor).value;
    }
    return f;
  };
  p.outer_f_gradient = [inst, n](const Vector& y) {
    Vector grad(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = inst.rate[i];
      const auto w = waiting_time(r, y[i], y[n + i], inst.denominator_margin);
      grad[i] = inst.phi_bar[i] * w.d_rho + inst.psi_bar[i] * r * safeguarded_log(r * (1.0 - y[i]), inst.log_floor).deriv;
      grad[n + i] = inst.phi_bar[i] * w.d_lambda;
    }
    return grad;
  };

  make_unconstrained(p);
  p.feasible_set = FeasibleSet::product({
      FeasibleSet::box_with_sum_cap(Vector::Constant(n, inst.lambda_min), Vector::Constant(n, inst.lambda_max),
                                    inst.lambda_lim),
      FeasibleSet::box_with_sum_cap(Vector::Constant(n, inst.p_min), Vector::Constant(n, inst.p_max), inst.p_max),
  });
  return p;
}

ProblemConstants outage_constants(const OutageInstance& inst) {
  const Eigen::Index n = inst.queues();
  const CompositionalProblem p = outage_build(inst);
  ProblemConstants k;
  double cg = static_cast<double>(n);
  Vector lo(2 * n);
  Vector hi(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double bg = inst.bandwidth[i] * inst.channel_floor / (1.0 + inst.p_min * inst.channel_floor);
    cg += 0.5 * (1.0 + bg * bg);
    lo[i] = 0.0;
    hi[i] = outage_indicator(inst.eta, inst.rate[i], inst.bandwidth[i], inst.p_min, inst.channel_floor);
    lo[n + i] = inst.lambda_min;
    hi[n + i] = inst.lambda_max;
  }
  k.C_g = k.V_g = cg;
  k.C_f = gradient_norm_sq_sup(p.outer_f_gradient, lo, hi);
  k.C_h = k.V_h = 0.0;
  k.C_q = 0.0;
  k.L_q = 0.0;
  k.D_x = p.feasible_set.diameter_sq();
  return k;
}

}  // namespace cscgd::queuing
