#include "cscgd/queuing/mg1_wired.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cscgd/distributions.hpp"
#include "cscgd/errors.hpp"
#include "cscgd/queuing/safeguard.hpp"

namespace cscgd::queuing {

namespace {

std::vector<Distribution> length_distributions(const Mg1WiredInstance& inst) {
  std::vector<Distribution> out;
  for (Eigen::Index i = 0; i < inst.queues(); ++i) {
    out.emplace_back(TruncatedExponential{inst.mean_length[i], inst.max_length[i]});
  }
  return out;
}

}  // namespace

void Mg1WiredInstance::validate() const {
  const Eigen::Index n = queues();
  if (n < 1) throw ConfigError("mg1_wired: need at least one queue");
  for (const Vector* v : {&lambda_max, &psi_bar, &phi_bar, &mean_length, &max_length}) {
    if (v->size() != n) throw ConfigError("mg1_wired: per-queue parameter has the wrong length");
  }
  if ((capacity.array() <= 0).any() || (mean_length.array() <= 0).any() || (max_length.array() <= 0).any()) {
    throw ConfigError("mg1_wired: capacities and packet lengths must be positive");
  }
  if (!(lambda_min > 0) || (lambda_max.array() < lambda_min).any()) {
    throw ConfigError("mg1_wired: need 0 < lambda_min <= lambda_max");
  }
  if (lambda_lim < n * lambda_min) throw ConfigError("mg1_wired: sum cap below N * lambda_min");
  if (!(d_max > 0)) throw ConfigError("mg1_wired: D_max must be positive");
  if (!(capacity_margin > 0 && capacity_margin < 1)) throw ConfigError("mg1_wired: capacity margin must be in (0,1)");
  if (strict_capacity_margin && !capacity_margin_holds()) {
    throw ConfigError("mg1_wired: lambda_max exceeds capacity_margin * C / L_max");
  }
}

bool Mg1WiredInstance::capacity_margin_holds() const {
  for (Eigen::Index i = 0; i < queues(); ++i) {
    if (lambda_max[i] > capacity_margin * capacity[i] / max_length[i]) return false;
  }
  return true;
}

Vector mg1_wired_length_moment(const Mg1WiredInstance& inst, int k) {
  const auto dists = length_distributions(inst);
  Vector out(inst.queues());
  for (Eigen::Index i = 0; i < inst.queues(); ++i) out[i] = raw_moment(dists[static_cast<std::size_t>(i)], k);
  return out;
}

Vector mg1_wired_delays(const Mg1WiredInstance& inst, const Vector& y) {
  const Eigen::Index n = inst.queues();
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = inst.capacity[i];
    out[i] = safeguarded_ratio(y[n + i], y[i] / c, inst.denominator_margin).value / (2.0 * c * c);
  }
  return out;
}

CompositionalProblem mg1_wired_build(const Mg1WiredInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.queues();
  CompositionalProblem p;
  p.name = "mg1-wired";
  p.dim_x = n;
  p.dim_g = 2 * n;
  p.dim_h = 2 * n;
  p.num_constraints = 1;

  const auto dists = length_distributions(inst);
  p.sample = [dists](RngStream& rng) { return draw_joint(dists, rng); };

  auto g = [n](const Vector& x, const Vector& zeta) {
    Vector out(2 * n);
    out.head(n) = x.cwiseProduct(zeta);
    out.tail(n) = x.cwiseProduct(zeta.cwiseAbs2());
    return out;
  };
  auto jac = [n](const Vector&, const Vector& zeta) {
    Matrix j = Matrix::Zero(n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      j(i, i) = zeta[i];
      j(i, n + i) = zeta[i] * zeta[i];
    }
    return j;
  };
  p.inner_g = g;
  p.inner_g_jacobian = jac;
  p.inner_h = g;
  p.inner_h_jacobian = jac;

  p.outer_f = [inst, n](const Vector& y) {
    double f = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double c = inst.capacity[i];
      const auto r = safeguarded_ratio(y[n + i], y[i] / c, inst.denominator_margin);
      f += inst.phi_bar[i] * r.value / (2.0 * c * c) - inst.psi_bar[i] * safeguarded_log(y[i], inst.log_floor).value;
    }
    return f;
  };
  p.outer_f_gradient = [inst, n](const Vector& y) {
    Vector grad(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double c = inst.capacity[i];
      const auto r = safeguarded_ratio(y[n + i], y[i] / c, inst.denominator_margin);
      grad[n + i] = inst.phi_bar[i] * r.d_x / (2.0 * c * c);
      grad[i] = inst.phi_bar[i] * r.d_y / (2.0 * c * c * c) -
                inst.psi_bar[i] * safeguarded_log(y[i], inst.log_floor).deriv;
    }
    return grad;
  };

  p.outer_q = [inst](const Vector& z) {
    Vector q(1);
    q[0] = mg1_wired_delays(inst, z).maxCoeff() - inst.d_max;
    return q;
  };
  p.outer_q_jacobian = [inst, n](const Vector& z) {
    Eigen::Index k = 0;
    mg1_wired_delays(inst, z).maxCoeff(&k);  // first maximizer
    const double c = inst.capacity[k];
    const auto r = safeguarded_ratio(z[n + k], z[k] / c, inst.denominator_margin);
    Matrix jq = Matrix::Zero(2 * n, 1);
    jq(n + k, 0) = r.d_x / (2.0 * c * c);
    jq(k, 0) = r.d_y / (2.0 * c * c * c);
    return jq;
  };

  p.feasible_set = FeasibleSet::box_with_sum_cap(Vector::Constant(n, inst.lambda_min), inst.lambda_max, inst.lambda_lim);
  return p;
}

ProblemConstants mg1_wired_constants(const Mg1WiredInstance& inst) {
  const Vector el2 = mg1_wired_length_moment(inst, 2);
  const Vector el4 = mg1_wired_length_moment(inst, 4);
  const double eps = inst.capacity_margin;
  ProblemConstants k;
  double cg = 0.0;
  double cf = 0.0;
  double lf = 0.0;
  double cq = 0.0;
  for (Eigen::Index i = 0; i < inst.queues(); ++i) {
    const double c = inst.capacity[i];
    const double lmax = inst.max_length[i];
    const double num = 1.0 - eps + eps * lmax;
    cg += inst.lambda_max[i] * (el2[i] + el4[i]);
    const double delay_part = num / (4.0 * c * (1.0 - eps) * (1.0 - eps));
    cf += std::pow(inst.phi_bar[i] * delay_part, 2) + std::pow(inst.psi_bar[i] / inst.lambda_min, 2);
    cq = std::max(cq, delay_part * delay_part);
    const double l1 = inst.phi_bar[i] * num / (c * c * c * std::pow(1.0 - eps, 3)) +
                      inst.phi_bar[i] * (eps * c * lmax - 1.0) / (2.0 * c * c * c * std::pow(1.0 - eps, 2)) +
                      2.0 * inst.psi_bar[i] / (inst.lambda_min * inst.lambda_min);
    const double l2 = inst.phi_bar[i] / (4.0 * c * c * (1.0 - eps));
    lf = std::max({lf, l1, l2});
  }
  k.C_g = k.V_g = k.C_h = k.V_h = cg;
  k.C_f = cf;
  k.L_f = lf;
  k.C_q = cq;
  k.D_x = mg1_wired_build(inst).feasible_set.diameter_sq();
  return k;
}

}  // namespace cscgd::queuing
