#include "cscgd/oracles/fstar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "cscgd/distributions.hpp"
#include "cscgd/errors.hpp"
#include "cscgd/oracles/quadrature.hpp"
#include "cscgd/rng.hpp"

namespace cscgd::oracles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class F>
std::pair<double, double> minimize_1d(F fn, double lo, double hi) {
  if (hi - lo <= 0) return {lo, fn(lo)};
  auto r = boost::math::tools::brent_find_minima(fn, lo, hi, 52);
  // Brent never samples the endpoints; compare them explicitly.
  for (double e : {lo, hi}) {
    const double v = fn(e);
    if (v < r.second) r = {e, v};
  }
  return r;
}

struct Ex1Data {
  Vector c, e1, e2, psi, phi, lo, hi;
  double cap;
};

Ex1Data example1_data(const queuing::Mg1WiredInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.queues();
  Ex1Data d;
  d.c = inst.capacity;
  d.psi = inst.psi_bar;
  d.phi = inst.phi_bar;
  d.e1.resize(n);
  d.e2.resize(n);
  d.lo = Vector::Constant(n, inst.lambda_min);
  d.hi.resize(n);
  d.cap = inst.lambda_lim;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto m = quadrature_moments(TruncatedExponential{inst.mean_length[i], inst.max_length[i]}, {1, 2});
    d.e1[i] = m.values.at(1);
    d.e2[i] = m.values.at(2);
    const double c = d.c[i];
    const double delay_cap = 2.0 * c * c * inst.d_max / (d.e2[i] + 2.0 * c * inst.d_max * d.e1[i]);
    d.hi[i] = std::min(inst.lambda_max[i], delay_cap);
    if (d.hi[i] < d.lo[i]) throw DomainError("example1: delay constraint excludes lambda_min for some queue");
  }
  if (d.lo.sum() > d.cap) throw DomainError("example1: sum cap below the lower bounds");
  return d;
}

double ex1_term(const Ex1Data& d, Eigen::Index i, double lambda) {
  const double slack = d.c[i] - lambda * d.e1[i];
  if (!(slack > 0) || !(lambda > 0)) return kInf;
  return d.phi[i] * lambda * d.e2[i] / (2.0 * d.c[i] * slack) - d.psi[i] * std::log(lambda * d.e1[i]);
}

double ex1_value(const Ex1Data& d, const Vector& x) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) f += ex1_term(d, i, x[i]);
  return f;
}

Vector ex1_gradient(const Ex1Data& d, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double slack = d.c[i] - x[i] * d.e1[i];
    g[i] = d.phi[i] * d.e2[i] / (2.0 * slack * slack) - d.psi[i] / x[i];
  }
  return g;
}

// Each partial derivative is increasing in its own rate, so both the inner
// inverses and the multiplier are found by bisection.
Vector ex1_kkt(const Ex1Data& d) {
  const Eigen::Index n = d.lo.size();
  auto partial = [&](Eigen::Index i, double l) {
    const double slack = d.c[i] - l * d.e1[i];
    return d.phi[i] * d.e2[i] / (2.0 * slack * slack) - d.psi[i] / l;
  };
  auto rates = [&](double tau) {
    Vector l(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double a = d.lo[i];
      double b = d.hi[i];
      if (partial(i, a) >= -tau) {
        l[i] = a;
      } else if (partial(i, b) <= -tau) {
        l[i] = b;
      } else {
        for (int it = 0; it < 200 && b - a > 0; ++it) {
          const double m = 0.5 * (a + b);
          if (m <= a || m >= b) break;
          (partial(i, m) < -tau ? a : b) = m;
        }
        l[i] = 0.5 * (a + b);
      }
    }
    return l;
  };
  Vector l = rates(0.0);
  if (l.sum() <= d.cap) return l;
  double lo = 0.0;
  double hi = 1.0;
  while (rates(hi).sum() > d.cap) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    (rates(m).sum() > d.cap ? lo : hi) = m;
  }
  l = rates(hi);
  // Rounding can leave the sum a few ulps above the cap.
  const double excess = l.sum() - d.cap;
  if (excess > 0) {
    Eigen::Index k = 0;
    (l - d.lo).maxCoeff(&k);
    l[k] -= excess;
  }
  return l;
}

double max_delay_slack(const queuing::Mg1WiredInstance& inst, const Ex1Data& d, const Vector& x) {
  double worst = -kInf;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double delay = x[i] * d.e2[i] / (2.0 * d.c[i] * (d.c[i] - x[i] * d.e1[i]));
    worst = std::max(worst, delay - inst.d_max);
  }
  return worst;
}

}  // namespace

Vector project_capped_box_sorted(const Vector& v, const Vector& lo, const Vector& hi, double cap) {
  const Eigen::Index n = v.size();
  auto at = [&](double tau) {
    Vector u(n);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = std::clamp(v[i] - tau, lo[i], hi[i]);
    return u;
  };
  Vector u0 = at(0.0);
  if (u0.sum() <= cap) return u0;
  std::vector<double> knots;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (v[i] - hi[i] > 0) knots.push_back(v[i] - hi[i]);
    if (v[i] - lo[i] > 0) knots.push_back(v[i] - lo[i]);
  }
  std::sort(knots.begin(), knots.end());
  double left = 0.0;
  double s_left = u0.sum();
  for (double k : knots) {
    const double s_k = at(k).sum();
    if (s_k <= cap) {
      // The sum is linear on [left, k]; interpolate to hit the cap.
      const double tau = s_left == s_k ? k : left + (s_left - cap) * (k - left) / (s_left - s_k);
      return at(tau);
    }
    left = k;
    s_left = s_k;
  }
  return at(left);
}

double example1_objective(const queuing::Mg1WiredInstance& inst, const Vector& lambda) {
  return ex1_value(example1_data(inst), lambda);
}

Example1Optimum example1_fstar(const queuing::Mg1WiredInstance& inst) {
  const Ex1Data d = example1_data(inst);
  auto proj = [&](const Vector& v) { return project_capped_box_sorted(v, d.lo, d.hi, d.cap); };
  Vector x = proj(0.5 * (d.lo + d.hi));
  double fx = ex1_value(d, x);
  double step = 1.0;
  Example1Optimum out;
  // Armijo steps until the decrease drops to rounding level in f.
  for (int it = 0; it < 20000; ++it) {
    const Vector g = ex1_gradient(d, x);
    const double gm = (x - proj(x - g)).norm();
    out.iterations = it;
    if (gm <= 1e-8) break;
    step *= 2.0;
    while (true) {
      const Vector xn = proj(x - step * g);
      const Vector dx = xn - x;
      const double fn = ex1_value(d, xn);
      if (fn <= fx + g.dot(dx) + dx.squaredNorm() / (2.0 * step) || step < 1e-300) {
        x = xn;
        fx = fn;
        break;
      }
      step *= 0.5;
    }
  }
  // Polish on the optimality conditions, which need no function values:
  // lambda_i(tau) = clamp(g_i^{-1}(-tau)) with tau >= 0 fixed by the sum cap.
  const Vector polished = ex1_kkt(d);
  const double fp = ex1_value(d, polished);
  const double gm_p = (polished - proj(polished - ex1_gradient(d, polished))).norm();
  if (gm_p < (x - proj(x - ex1_gradient(d, x))).norm() && fp <= fx + 1e-12 * std::abs(fx)) {
    x = polished;
    fx = fp;
  }
  out.x_star = x;
  out.f_star = fx;
  out.gradient_map_norm = (x - proj(x - ex1_gradient(d, x))).norm();
  out.max_delay_slack = max_delay_slack(inst, d, x);
  return out;
}

Example1Optimum example1_grid(const queuing::Mg1WiredInstance& inst, int points) {
  if (points < 2) throw ConfigError("example1 grid: need at least 2 points per axis");
  const Ex1Data d = example1_data(inst);
  const Eigen::Index n = d.lo.size();
  const Eigen::Index last = n - 1;
  std::vector<std::vector<double>> nodes(static_cast<std::size_t>(last));
  std::vector<std::vector<double>> values(static_cast<std::size_t>(last));
  for (Eigen::Index i = 0; i < last; ++i) {
    for (int k = 0; k < points; ++k) {
      const double x = d.lo[i] + (d.hi[i] - d.lo[i]) * k / (points - 1);
      nodes[i].push_back(x);
      values[i].push_back(ex1_term(d, i, x));
    }
  }
  Example1Optimum best;
  best.f_star = kInf;
  std::vector<int> idx(static_cast<std::size_t>(last), 0);
  while (true) {
    double used = 0.0;
    double partial = 0.0;
    for (Eigen::Index i = 0; i < last; ++i) {
      used += nodes[i][idx[i]];
      partial += values[i][idx[i]];
    }
    const double room = std::min(d.hi[last], d.cap - used);
    if (room >= d.lo[last]) {
      const auto [xl, fl] = minimize_1d([&](double t) { return ex1_term(d, last, t); }, d.lo[last], room);
      if (partial + fl < best.f_star) {
        best.f_star = partial + fl;
        best.x_star.resize(n);
        for (Eigen::Index i = 0; i < last; ++i) best.x_star[i] = nodes[i][idx[i]];
        best.x_star[last] = xl;
      }
    }
    Eigen::Index k = 0;
    while (k < last && ++idx[k] == points) idx[k++] = 0;
    if (k == last) break;
  }
  if (!std::isfinite(best.f_star)) throw DomainError("example1 grid: no feasible node");
  best.max_delay_slack = max_delay_slack(inst, d, best.x_star);
  return best;
}

namespace {

struct Knee {
  double eps;
  // Returns value, d/dx, d/dy of the safeguarded ratio x / (1 - y).
  std::array<double, 3> operator()(double x, double y) const {
    if (y < 1.0 - eps) return {x / (1.0 - y), 1.0 / (1.0 - y), x / ((1.0 - y) * (1.0 - y))};
    const double e2 = eps * eps;
    return {x * (y - 1.0 + 2.0 * eps) / e2, (y - 1.0 + 2.0 * eps) / e2, x / e2};
  }
};

}  // namespace

GridSearchResult example2_fstar(const queuing::Mg1ErgodicInstance& inst, std::int64_t mc_samples, int resolution,
                                std::uint64_t seed, bool allow_small) {
  inst.validate();
  if (!allow_small && mc_samples < 100000) throw ConfigError("example2 oracle: need at least 1e5 Monte Carlo samples");
  if (mc_samples < 2 || resolution < 1) throw ConfigError("example2 oracle: invalid sample count or resolution");
  const int n = static_cast<int>(inst.queues());
  const auto s_count = static_cast<std::size_t>(mc_samples);
  const double p_hi = std::min(inst.p_max, inst.p_max - (n - 1) * inst.p_min);
  std::vector<double> grid;
  for (int k = 0; k < resolution; ++k) {
    grid.push_back(resolution == 1 ? inst.p_min : inst.p_min + (p_hi - inst.p_min) * k / (resolution - 1));
  }

  // Shared channel draws, rates stored per (queue, power node).
  RngStream rng(seed, 0);
  const Distribution chan = TruncatedChiSquared{inst.dof, inst.channel_floor};
  std::vector<float> zeta(s_count * n);
  for (std::size_t s = 0; s < s_count; ++s) {
    for (int i = 0; i < n; ++i) zeta[s * n + i] = static_cast<float>(draw_scalar(chan, rng));
  }
  const auto r_count = static_cast<std::size_t>(resolution);
  std::vector<float> rate(static_cast<std::size_t>(n) * r_count * s_count);
  auto rate_at = [&](int i, int k) { return rate.data() + (static_cast<std::size_t>(i) * r_count + k) * s_count; };
  std::vector<double> e1(n * r_count), e2(n * r_count);
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < r_count; ++k) {
      float* r = rate_at(i, static_cast<int>(k));
      double a = 0.0, b = 0.0;
      for (std::size_t s = 0; s < s_count; ++s) {
        const double v = inst.bandwidth[i] * std::log1p(static_cast<double>(zeta[s * n + i]) * grid[k]);
        r[s] = static_cast<float>(v);
        a += 1.0 / v;
        b += 1.0 / (v * v);
      }
      e1[i * r_count + k] = a / mc_samples;
      e2[i * r_count + k] = b / mc_samples;
    }
  }

  const Knee knee{inst.knee_margin};
  auto term = [&](int i, std::size_t k, double lambda) {
    const double v = knee(lambda * e2[i * r_count + k], lambda * e1[i * r_count + k])[0];
    return inst.phi_bar[i] * v / 2.0 - inst.psi_bar[i] * std::log(lambda);
  };
  // Optimal rates for fixed powers: separable convex terms under the sum cap.
  auto best_rates = [&](const std::vector<std::size_t>& ks, Vector& lam) {
    lam.resize(n);
    auto solve = [&](double tau) {
      for (int i = 0; i < n; ++i) {
        lam[i] = minimize_1d([&](double t) { return term(i, ks[i], t) + tau * t; }, inst.lambda_min, inst.lambda_max)
                     .first;
      }
    };
    solve(0.0);
    if (lam.sum() > inst.lambda_lim) {
      double lo = 0.0, hi = 1.0;
      solve(hi);
      while (lam.sum() > inst.lambda_lim) {
        hi *= 2.0;
        solve(hi);
      }
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        solve(mid);
        (lam.sum() > inst.lambda_lim ? lo : hi) = mid;
      }
      solve(hi);
    }
    double f = 0.0;
    for (int i = 0; i < n; ++i) f += term(i, ks[i], lam[i]);
    return f;
  };

  GridSearchResult out;
  out.axis_lo.assign(n, inst.p_min);
  out.axis_hi.assign(n, p_hi);
  out.resolution.assign(n, resolution);
  out.best_value = kInf;
  std::vector<std::size_t> ks(n, 0);
  std::vector<std::size_t> best_ks;
  while (true) {
    double psum = 0.0;
    for (int i = 0; i < n; ++i) psum += grid[ks[i]];
    bool ok = psum <= inst.p_max + 1e-9;
    double value = std::numeric_limits<double>::quiet_NaN();
    if (ok) {
      double m = 0.0;
      for (std::size_t s = 0; s < s_count; ++s) {
        float lo = rate_at(0, static_cast<int>(ks[0]))[s];
        for (int i = 1; i < n; ++i) lo = std::min(lo, rate_at(i, static_cast<int>(ks[i]))[s]);
        m += lo;
      }
      ok = inst.r_min - m / mc_samples <= 0.0;
    }
    if (ok) {
      Vector lam;
      value = best_rates(ks, lam);
      if (value < out.best_value) {
        out.best_value = value;
        best_ks = ks;
        out.best_point.resize(2 * n);
        out.best_point.head(n) = lam;
        for (int i = 0; i < n; ++i) out.best_point[n + i] = grid[ks[i]];
      }
    }
    out.feasible.push_back(ok);
    out.values.push_back(value);
    int k = 0;
    while (k < n && ++ks[k] == r_count) ks[k++] = 0;
    if (k == n) break;
  }
  if (best_ks.empty()) throw DomainError("example2 oracle: no feasible grid node");

  // Delta-method standard errors at the best node.
  double var_f = 0.0;
  for (int i = 0; i < n; ++i) {
    const float* r = rate_at(i, static_cast<int>(best_ks[i]));
    const double m1 = e1[i * r_count + best_ks[i]];
    const double m2 = e2[i * r_count + best_ks[i]];
    double c11 = 0.0, c12 = 0.0, c22 = 0.0;
    for (std::size_t s = 0; s < s_count; ++s) {
      const double a = 1.0 / r[s] - m1;
      const double b = 1.0 / (static_cast<double>(r[s]) * r[s]) - m2;
      c11 += a * a;
      c12 += a * b;
      c22 += b * b;
    }
    const double lam = out.best_point[i];
    const auto kv = knee(lam * m2, lam * m1);
    const double g1 = inst.phi_bar[i] / 2.0 * kv[2] * lam;
    const double g2 = inst.phi_bar[i] / 2.0 * kv[1] * lam;
    var_f += (g1 * g1 * c11 + 2.0 * g1 * g2 * c12 + g2 * g2 * c22) / (mc_samples - 1.0) / mc_samples;
  }
  out.best_value_se = std::sqrt(var_f);
  double m = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < s_count; ++s) {
    float lo = rate_at(0, static_cast<int>(best_ks[0]))[s];
    for (int i = 1; i < n; ++i) lo = std::min(lo, rate_at(i, static_cast<int>(best_ks[i]))[s]);
    m += lo;
    m2 += static_cast<double>(lo) * lo;
  }
  m /= mc_samples;
  out.best_constraint = inst.r_min - m;
  out.best_constraint_se = std::sqrt(std::max(0.0, m2 / mc_samples - m * m) / (mc_samples - 1.0));
  return out;
}

}  // namespace cscgd::oracles
