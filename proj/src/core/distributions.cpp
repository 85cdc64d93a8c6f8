#include "cscgd/distributions.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "cscgd/errors.hpp"

namespace cscgd {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// log of sum_{j<k} x^j / j!, accumulated in log space for large x.
double log_poisson_partial_sum(int k, double x) {
  if (x == 0.0) return 0.0;
  double log_term = 0.0;
  double log_max = 0.0;
  std::vector<double> logs(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    if (j > 0) log_term += std::log(x) - std::log(static_cast<double>(j));
    logs[static_cast<std::size_t>(j)] = log_term;
    log_max = std::max(log_max, log_term);
  }
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - log_max);
  return log_max + std::log(acc);
}

double log_chi_squared_even_survival(int k, double x) {
  if (x <= 0.0) return 0.0;
  return -0.5 * x + log_poisson_partial_sum(k, 0.5 * x);
}

}  // namespace

double chi_squared_even_survival(int k, double x) {
  return std::exp(log_chi_squared_even_survival(k, x));
}

double chi_squared_even_inverse_survival(int k, double target) {
  if (!(target > 0.0 && target <= 1.0)) {
    throw DomainError("chi-squared inverse survival target must lie in (0, 1]");
  }
  const double log_target = std::log(target);
  double lo = 0.0;
  double hi = 2.0 * k + 10.0;
  while (log_chi_squared_even_survival(k, hi) > log_target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 400 && hi - lo > 1e-12 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (log_chi_squared_even_survival(k, mid) > log_target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void validate(const Distribution& dist) {
  std::visit(Overloaded{
                 [](const ExponentialMean& d) {
                   if (!(d.mean > 0.0)) throw ConfigError("exponential mean must be positive");
                 },
                 [](const TruncatedExponential& d) {
                   if (!(d.mean > 0.0)) throw ConfigError("truncated exponential mean must be positive");
                   if (!(d.lower >= 0.0)) throw ConfigError("truncated exponential lower bound must be >= 0");
                   if (!(d.upper > d.lower)) throw ConfigError("truncated exponential needs upper > lower");
                 },
                 [](const TruncatedChiSquared& d) {
                   if (d.dof <= 0 || d.dof % 2 != 0) {
                     throw ConfigError("truncated chi-squared needs an even positive dof");
                   }
                   if (!(d.lower >= 0.0)) throw ConfigError("truncated chi-squared lower bound must be >= 0");
                   if (!(chi_squared_even_survival(d.dof / 2, d.lower) > 0.0)) {
                     throw ConfigError("truncated chi-squared lower bound leaves no probability mass");
                   }
                 },
                 [](const ConstantVec& d) {
                   if (d.values.size() == 0) throw ConfigError("constant distribution needs values");
                   if (!d.values.allFinite()) throw ConfigError("constant distribution values must be finite");
                 },
                 [](const Categorical& d) {
                   if (d.values.empty() || d.values.size() != d.weights.size()) {
                     throw ConfigError("categorical needs matching non-empty values and weights");
                   }
                   double total = 0.0;
                   for (double w : d.weights) {
                     if (!(w >= 0.0)) throw ConfigError("categorical weights must be non-negative");
                     total += w;
                   }
                   if (!(total > 0.0)) throw ConfigError("categorical weights must not all be zero");
                 },
             },
             dist);
}

Eigen::Index draw_size(const Distribution& dist) {
  if (const auto* c = std::get_if<ConstantVec>(&dist)) return c->values.size();
  return 1;
}

double draw_scalar(const Distribution& dist, RngStream& rng) {
  return std::visit(
      Overloaded{
          [&](const ExponentialMean& d) { return -d.mean * std::log1p(-rng.uniform()); },
          [&](const TruncatedExponential& d) {
            // Memoryless: shift by `lower`, then restrict the width by inversion.
            const double width = d.upper - d.lower;
            const double mass = std::isinf(width) ? 1.0 : -std::expm1(-width / d.mean);
            return d.lower - d.mean * std::log1p(-rng.uniform() * mass);
          },
          [&](const TruncatedChiSquared& d) {
            const int k = d.dof / 2;
            const double tail = chi_squared_even_survival(k, d.lower);
            return chi_squared_even_inverse_survival(k, rng.uniform_open() * tail);
          },
          [&](const ConstantVec& d) -> double {
            if (d.values.size() != 1) throw ConfigError("draw_scalar on a vector-valued constant");
            return d.values[0];
          },
          [&](const Categorical& d) {
            const double total = std::accumulate(d.weights.begin(), d.weights.end(), 0.0);
            const double u = rng.uniform() * total;
            double cum = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              cum += d.weights[i];
              if (u < cum) return d.values[i];
            }
            return d.values.back();
          },
      },
      dist);
}

Vector draw(const Distribution& dist, RngStream& rng) {
  if (const auto* c = std::get_if<ConstantVec>(&dist)) return c->values;
  Vector out(1);
  out[0] = draw_scalar(dist, rng);
  return out;
}

Vector draw_joint(std::span<const Distribution> components, RngStream& rng) {
  Eigen::Index total = 0;
  for (const auto& d : components) total += draw_size(d);
  Vector out(total);
  Eigen::Index offset = 0;
  for (const auto& d : components) {
    const Vector part = draw(d, rng);
    out.segment(offset, part.size()) = part;
    offset += part.size();
  }
  return out;
}

double analytic_mean(const Distribution& dist) {
  return std::visit(
      Overloaded{
          [](const ExponentialMean& d) { return d.mean; },
          [](const TruncatedExponential& d) {
            const double width = d.upper - d.lower;
            if (std::isinf(width)) return d.lower + d.mean;
            // E[X | X <= w] for Exp(mean) = mean - w e^{-w/mean} / (1 - e^{-w/mean}).
            const double e = std::exp(-width / d.mean);
            return d.lower + d.mean - width * e / (1.0 - e);
          },
          [](const TruncatedChiSquared& d) {
            // E[X 1{X>=G}] = dof * S_{dof+2}(G); divide by S_dof(G).
            const int k = d.dof / 2;
            return d.dof * chi_squared_even_survival(k + 1, d.lower) / chi_squared_even_survival(k, d.lower);
          },
          [](const ConstantVec& d) -> double {
            if (d.values.size() != 1) throw ConfigError("analytic_mean on a vector-valued constant");
            return d.values[0];
          },
          [](const Categorical& d) {
            double total = 0.0;
            double acc = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              total += d.weights[i];
              acc += d.weights[i] * d.values[i];
            }
            return acc / total;
          },
      },
      dist);
}

double raw_moment(const Distribution& dist, int k) {
  if (k < 0) throw ConfigError("raw_moment order must be nonnegative");
  if (k == 0) return 1.0;
  // E[Y^j] for Y ~ Exp(mean) restricted to [0, w]: mean^j j! P(j+1, w/mean) / P(1, w/mean).
  auto truncated_exp_moment = [](double mean, double width, int j) {
    const double fact = boost::math::tgamma(j + 1.0) * std::pow(mean, j);
    if (std::isinf(width)) return fact;
    const double x = width / mean;
    return fact * boost::math::gamma_p(j + 1.0, x) / boost::math::gamma_p(1.0, x);
  };
  return std::visit(
      Overloaded{
          [&](const ExponentialMean& d) { return truncated_exp_moment(d.mean, INFINITY, k); },
          [&](const TruncatedExponential& d) {
            const double width = d.upper - d.lower;
            double acc = 0.0;
            for (int j = 0; j <= k; ++j) {
              acc += boost::math::binomial_coefficient<double>(k, j) * std::pow(d.lower, k - j) *
                     truncated_exp_moment(d.mean, width, j);
            }
            return acc;
          },
          [&](const TruncatedChiSquared& d) {
            // E[X^j 1{X>=G}] = 2^j (K)_j Q(K+j, G/2) for X ~ chi^2(2K).
            const int kk = d.dof / 2;
            double rising = 1.0;
            for (int i = 0; i < k; ++i) rising *= 2.0 * (kk + i);
            return rising * chi_squared_even_survival(kk + k, d.lower) / chi_squared_even_survival(kk, d.lower);
          },
          [&](const ConstantVec& d) -> double {
            if (d.values.size() != 1) throw ConfigError("raw_moment on a vector-valued constant");
            return std::pow(d.values[0], k);
          },
          [&](const Categorical& d) {
            double total = 0.0;
            double acc = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              total += d.weights[i];
              acc += d.weights[i] * std::pow(d.values[i], k);
            }
            return acc / total;
          },
      },
      dist);
}

std::string describe(const Distribution& dist) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const ExponentialMean& d) { os << "Exponential(mean=" << d.mean << ")"; },
                 [&](const TruncatedExponential& d) {
                   os << "TruncatedExponential(mean=" << d.mean << ", [" << d.lower << ", " << d.upper << "])";
                 },
                 [&](const TruncatedChiSquared& d) {
                   os << "TruncatedChiSquared(dof=" << d.dof << ", lower=" << d.lower << ")";
                 },
                 [&](const ConstantVec& d) { os << "Constant(" << d.values.transpose() << ")"; },
                 [&](const Categorical& d) { os << "Categorical(" << d.values.size() << " atoms)"; },
             },
             dist);
  return os.str();
}

MonteCarloEstimate monte_carlo_mean(const std::function<Vector(const Vector&)>& fn,
                                    const Sampler& sampler, long n_samples, RngStream& rng) {
  if (n_samples < 2) throw ConfigError("monte_carlo_mean needs at least two samples");
  Vector mean;
  Vector m2;
  for (long i = 0; i < n_samples; ++i) {
    const Vector sample = sampler(rng);
    const Vector value = fn(sample);
    if (!value.allFinite()) {
      std::ostringstream os;
      os << "non-finite Monte-Carlo output at sample " << i << " = [" << sample.transpose() << "]";
      throw NumericalError(os.str(), "monte_carlo_mean");
    }
    if (i == 0) {
      mean = Vector::Zero(value.size());
      m2 = Vector::Zero(value.size());
    }
    // Welford update.
    const Vector delta = value - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta.cwiseProduct(value - mean);
  }
  MonteCarloEstimate out;
  out.mean = mean;
  out.std_err = (m2 / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples)).cwiseSqrt();
  out.samples = n_samples;
  return out;
}

MonteCarloEstimate monte_carlo_mean(const std::function<Vector(const Vector&)>& fn,
                                    const Distribution& dist, long n_samples, RngStream& rng) {
  validate(dist);
  return monte_carlo_mean(fn, Sampler([&dist](RngStream& r) { return draw(dist, r); }), n_samples, rng);
}

}  // namespace cscgd
