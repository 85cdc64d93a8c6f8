#include "cscgd/queuing/mg1_ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cscgd/distributions.hpp"
#include "cscgd/errors.hpp"
#include "cscgd/queuing/safeguard.hpp"

namespace cscgd::queuing {

void Mg1ErgodicInstance::validate() const {
  const Eigen::Index n = queues();
  if (n < 1) throw ConfigError("mg1_ergodic: need at least one queue");
  if (psi_bar.size() != n || phi_bar.size() != n) throw ConfigError("mg1_ergodic: weight vectors have the wrong length");
  if ((bandwidth.array() <= 0).any()) throw ConfigError("mg1_ergodic: bandwidths must be positive");
  if (!(p_min > 0) || n * p_min > p_max) throw ConfigError("mg1_ergodic: need 0 < P_min and N P_min <= P_max");
  if (!(lambda_min > 0) || lambda_max < lambda_min || lambda_lim < n * lambda_min) {
    throw ConfigError("mg1_ergodic: invalid arrival-rate bounds");
  }
  if (dof < 2 || dof % 2 != 0) throw ConfigError("mg1_ergodic: dof must be even and positive");
  if (!(channel_floor > 0)) throw ConfigError("mg1_ergodic: channel support must be bounded away from zero");
  if (!(knee_margin > 0 && knee_margin < 1)) throw ConfigError("mg1_ergodic: knee margin must be in (0,1)");
}

double ergodic_rate(double bandwidth, double p, double zeta) { return bandwidth * std::log1p(zeta * p); }

double ergodic_rate_dp(double bandwidth, double p, double zeta) { return bandwidth * zeta / (1.0 + zeta * p); }

CompositionalProblem mg1_ergodic_build(const Mg1ErgodicInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.queues();
  CompositionalProblem p;
  p.name = "mg1-ergodic";
  p.dim_x = 2 * n;
  p.dim_g = 3 * n;
  p.dim_h = 1;
  p.num_constraints = 1;

  std::vector<Distribution> channel(static_cast<std::size_t>(n), TruncatedChiSquared{inst.dof, inst.channel_floor});
  p.sample = [channel](RngStream& rng) { return draw_joint(channel, rng); };

  const Vector bw = inst.bandwidth;
  p.inner_g = [bw, n](const Vector& x, const Vector& zeta) {
    Vector out(3 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double b = ergodic_rate(bw[i], x[n + i], zeta[i]);
      out[i] = x[i];
      out[n + i] = x[i] / b;
      out[2 * n + i] = x[i] / (b * b);
    }
    return out;
  };
  p.inner_g_jacobian = [bw, n](const Vector& x, const Vector& zeta) {
    Matrix j = Matrix::Zero(2 * n, 3 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double b = ergodic_rate(bw[i], x[n + i], zeta[i]);
      const double db = ergodic_rate_dp(bw[i], x[n + i], zeta[i]);
      j(i, i) = 1.0;
      j(i, n + i) = 1.0 / b;
      j(i, 2 * n + i) = 1.0 / (b * b);
      j(n + i, n + i) = -x[i] * db / (b * b);
      j(n + i, 2 * n + i) = -2.0 * x[i] * db / (b * b * b);
    }
    return j;
  };

  // First minimizing index; ties resolve to the lowest queue.
  auto argmin_rate = [bw, n](const Vector& x, const Vector& zeta, double& best) {
    Eigen::Index k = 0;
    best = ergodic_rate(bw[0], x[n], zeta[0]);
    for (Eigen::Index i = 1; i < n; ++i) {
      const double b = ergodic_rate(bw[i], x[n + i], zeta[i]);
      if (b < best) {
        best = b;
        k = i;
      }
    }
    return k;
  };
  p.inner_h = [argmin_rate](const Vector& x, const Vector& zeta) {
    double best = 0.0;
    argmin_rate(x, zeta, best);
    return Vector::Constant(1, -best);
  };
  p.inner_h_jacobian = [argmin_rate, bw, n](const Vector& x, const Vector& zeta) {
    double best = 0.0;
    const Eigen::Index k = argmin_rate(x, zeta, best);
    Matrix j = Matrix::Zero(2 * n, 1);
    j(n + k, 0) = -ergodic_rate_dp(bw[k], x[n + k], zeta[k]);
    return j;
  };

  p.outer_f = [inst, n](const Vector& y) {
    double f = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto r = safeguarded_ratio(y[2 * n + i], y[n + i], inst.knee_margin);
      f += inst.phi_bar[i] * r.value / 2.0 - inst.psi_bar[i] * safeguarded_log(y[i], inst.log_floor).value;
    }
    return f;
  };
  p.outer_f_gradient = [inst, n](const Vector& y) {
    Vector grad(3 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto r = safeguarded_ratio(y[2 * n + i], y[n + i], inst.knee_margin);
      grad[i] = -inst.psi_bar[i] * safeguarded_log(y[i], inst.log_floor).deriv;
      grad[n + i] = inst.phi_bar[i] * r.d_y / 2.0;
      grad[2 * n + i] = inst.phi_bar[i] * r.d_x / 2.0;
    }
    return grad;
  };

  const double r_min = inst.r_min;
  p.outer_q = [r_min](const Vector& z) { return Vector::Constant(1, r_min + z[0]); };
  p.outer_q_jacobian = [](const Vector&) { return Matrix::Ones(1, 1); };

  p.feasible_set = FeasibleSet::product({
      FeasibleSet::box_with_sum_cap(Vector::Constant(n, inst.lambda_min), Vector::Constant(n, inst.lambda_max),
                                    inst.lambda_lim),
      FeasibleSet::box_with_sum_cap(Vector::Constant(n, inst.p_min), Vector::Constant(n, inst.p_max), inst.p_max),
  });
  return p;
}

ProblemConstants mg1_ergodic_constants(const Mg1ErgodicInstance& inst) {
  const double eps = inst.knee_margin;
  const double pg = 1.0 + inst.p_min * inst.channel_floor;
  ProblemConstants k;
  double cg = static_cast<double>(inst.queues());
  double cf = 0.0;
  double lf = 0.0;
  double bmax = 0.0;
  for (Eigen::Index i = 0; i < inst.queues(); ++i) {
    const double b = ergodic_rate(inst.bandwidth[i], inst.p_min, inst.channel_floor);
    const double b2 = b * b;
    cg += (1.0 / b2) * (1.0 + inst.lambda_max / (pg * pg * b2)) +
          (1.0 / (b2 * b2)) * (1.0 + 2.0 * inst.lambda_max / (pg * pg * b2));
    cf += inst.phi_bar[i] * inst.phi_bar[i] / (4.0 * std::pow(1.0 - eps, 2)) *
              (1.0 + 1.0 / (b2 * std::pow(1.0 - eps, 2))) +
          std::pow(inst.psi_bar[i] / inst.lambda_min, 2);
    lf = std::max(lf, inst.phi_bar[i] / std::pow(1.0 - eps, 2) * (0.5 + 1.0 / (b * (1.0 - eps))) +
                          2.0 * inst.psi_bar[i] / (inst.lambda_min * inst.lambda_min));
    bmax = std::max(bmax, inst.bandwidth[i]);
  }
  k.C_g = k.V_g = cg;
  k.C_h = k.V_h = bmax / (pg * pg);
  k.C_f = cf;
  k.L_f = lf;
  k.C_q = 1.0;
  k.L_q = 0.0;
  k.D_x = mg1_ergodic_build(inst).feasible_set.diameter_sq();
  return k;
}

}  // namespace cscgd::queuing
