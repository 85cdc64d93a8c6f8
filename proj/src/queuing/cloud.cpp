#include "cscgd/queuing/cloud.hpp"

#include "cscgd/errors.hpp"
#include "cscgd/queuing/safeguard.hpp"

namespace cscgd::queuing {

void CloudInstance::validate() const {
  const Eigen::Index n = classes();
  if (n < 1) throw ConfigError("cloud: need at least one class");
  if (subscribers.size() != n || static_cast<Eigen::Index>(load.size()) != n) {
    throw ConfigError("cloud: per-class parameter has the wrong length");
  }
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (!(price[i] < price[i + 1])) throw ConfigError("cloud: prices must be strictly increasing");
  }
  if (!(tier_lower >= 0) || tier_upper < tier_lower) throw ConfigError("cloud: need 0 <= l <= u");
  if (!(r1_min > 0) || r1_max < r1_min) throw ConfigError("cloud: invalid bounds on r_1");
  if (!(capacity_min > 0) || capacity_max < capacity_min) throw ConfigError("cloud: invalid capacity bounds");
  if (!(eta > 0)) throw ConfigError("cloud: sigmoid sharpness must be positive");
  for (const auto& d : load) {
    cscgd::validate(d);
    if (draw_size(d) != 1) throw ConfigError("cloud: loads must be scalar");
  }
}

Vector cloud_resources(const Vector& x) {
  const Eigen::Index n = x.size() - 1;
  Vector r(n);
  r[0] = x[0];
  for (Eigen::Index i = 1; i < n; ++i) r[i] = r[i - 1] + x[i];
  return r;
}

Vector cloud_decision(const Vector& r, double capacity) {
  const Eigen::Index n = r.size();
  Vector x(n + 1);
  x[0] = r[0];
  for (Eigen::Index i = 1; i < n; ++i) x[i] = r[i] - r[i - 1];
  x[n] = capacity;
  return x;
}

Vector cloud_inner(const CloudInstance& inst, const Vector& x, const Vector& zeta, bool hard) {
  const Eigen::Index n = inst.classes();
  const Vector r = cloud_resources(x);
  const double c = x[n];
  const double s = zeta.dot(r);
  Vector g(2 * n + 1);
  if (hard) {
    const double b = s <= c ? 1.0 : 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      g[i] = (c - r[i] < s && s <= c) ? 1.0 : 0.0;
      g[n + i] = b;
    }
  } else {
    const double b = sigmoid(inst.eta * (c - s) / c).value;
    for (Eigen::Index i = 0; i < n; ++i) {
      g[i] = sigmoid(inst.eta * (s - c + r[i]) / c).value * b;
      g[n + i] = b;
    }
  }
  g[2 * n] = c;
  return g;
}

Vector cloud_blocking(const Vector& y) {
  const Eigen::Index n = (y.size() - 1) / 2;
  return y.head(n).cwiseQuotient(y.segment(n, n));
}

CompositionalProblem cloud_build(const CloudInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.classes();
  CompositionalProblem p;
  p.name = "cloud";
  p.dim_x = n + 1;
  p.dim_g = 2 * n + 1;

  const auto loads = inst.load;
  p.sample = [loads](RngStream& rng) { return draw_joint(loads, rng); };
  p.inner_g = [inst](const Vector& x, const Vector& zeta) { return cloud_inner(inst, x, zeta, false); };
  p.inner_g_jacobian = [inst, n](const Vector& x, const Vector& zeta) {
    const Vector r = cloud_resources(x);
    const double c = x[n];
    const double s = zeta.dot(r);
    const double eta = inst.eta;
    // ds/dx_k = sum_{j >= k} zeta_j for the resource coordinates.
    Vector ds = Vector::Zero(n + 1);
    for (Eigen::Index k = n - 1; k >= 0; --k) ds[k] = zeta[k] + (k + 1 < n ? ds[k + 1] : 0.0);
    Vector dv = -ds / c;
    dv[n] = s / (c * c);
    const auto sb = sigmoid(eta * (c - s) / c);
    Matrix j = Matrix::Zero(n + 1, 2 * n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto sa = sigmoid(eta * (s - c + r[i]) / c);
      for (Eigen::Index k = 0; k <= n; ++k) {
        double dw;
        if (k == n) {
          dw = -(s + r[i]) / (c * c);
        } else {
          dw = (ds[k] + (k <= i ? 1.0 : 0.0)) / c;
        }
        const double db = eta * sb.deriv * dv[k];
        j(k, i) = eta * sa.deriv * dw * sb.value + sa.value * db;
        j(k, n + i) = db;
      }
    }
    j(n, 2 * n) = 1.0;
    return j;
  };

  p.outer_f = [inst, n](const Vector& y) {
    double f = inst.maintenance * y[2 * n];
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto inv = safeguarded_inverse(y[n + i], inst.denominator_margin);
      f -= inst.price[i] * inst.subscribers[i] * (1.0 - y[i] * inv.value);
    }
    return f;
  };
  p.outer_f_gradient = [inst, n](const Vector& y) {
    Vector grad(2 * n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto inv = safeguarded_inverse(y[n + i], inst.denominator_margin);
      const double w = inst.price[i] * inst.subscribers[i];
      grad[i] = w * inv.value;
      grad[n + i] = w * y[i] * inv.deriv;
    }
    grad[2 * n] = inst.maintenance;
    return grad;
  };

  make_unconstrained(p);
  Vector lo(n + 1);
  Vector hi(n + 1);
  lo[0] = inst.r1_min;
  hi[0] = inst.r1_max;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double gap = inst.price[i] - inst.price[i - 1];
    lo[i] = inst.tier_lower * gap;
    hi[i] = inst.tier_upper * gap;
  }
  lo[n] = inst.capacity_min;
  hi[n] = inst.capacity_max;
  p.feasible_set = FeasibleSet::box(lo, hi);
  return p;
}

ProblemConstants cloud_constants(const CloudInstance& inst) {
  ProblemConstants k;
  k.C_h = k.V_h = 0.0;
  k.C_q = 0.0;
  k.L_q = 0.0;
  k.D_x = cloud_build(inst).feasible_set.diameter_sq();
  return k;
}

}  // namespace cscgd::queuing
