#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cscgd/linalg.hpp"
#include "cscgd/rng.hpp"

namespace cscgd {

/// Exponential with the given mean.
struct ExponentialMean {
  double mean;
};

/// Exponential(mean) restricted to [lower, upper]; `upper` may be +inf.
struct TruncatedExponential {
  double mean;
  double upper;
  double lower = 0.0;
};

/// Chi-squared with `dof` (even) degrees of freedom restricted to [lower, inf).
struct TruncatedChiSquared {
  int dof;
  double lower;
};

/// Degenerate vector-valued distribution.
struct ConstantVec {
  Vector values;
};

/// Finite support with the given (unnormalized) weights.
struct Categorical {
  std::vector<double> values;
  std::vector<double> weights;
};

using Distribution =
    std::variant<ExponentialMean, TruncatedExponential, TruncatedChiSquared, ConstantVec, Categorical>;

/// Throws ConfigError when the parameters do not describe a valid distribution.
void validate(const Distribution& dist);

/// Number of components produced by one draw.
Eigen::Index draw_size(const Distribution& dist);

/// One i.i.d. draw. Truncated families are sampled by inverse-CDF restriction,
/// so every draw consumes exactly one uniform variate.
Vector draw(const Distribution& dist, RngStream& rng);

/// Scalar draw; throws ConfigError for vector-valued families.
double draw_scalar(const Distribution& dist, RngStream& rng);

/// Concatenation of independent draws from each component.
Vector draw_joint(std::span<const Distribution> components, RngStream& rng);

/// Analytic mean of a scalar family (used by property tests and presets).
double analytic_mean(const Distribution& dist);

/// Analytic raw moment E[X^k] of a scalar family, k >= 0.
double raw_moment(const Distribution& dist, int k);

std::string describe(const Distribution& dist);

/// Upper tail of the chi-squared distribution with 2k degrees of freedom.
double chi_squared_even_survival(int k, double x);

/// Inverts `chi_squared_even_survival(k, .) = target` by bisection to 1e-12 relative.
double chi_squared_even_inverse_survival(int k, double target);

struct MonteCarloEstimate {
  Vector mean;
  Vector std_err;
  long samples = 0;
};

using Sampler = std::function<Vector(RngStream&)>;

/// Sample mean and standard error of `fn` over `n_samples` i.i.d. draws from `sampler`.
/// Throws NumericalError on a non-finite output, echoing the offending sample.
MonteCarloEstimate monte_carlo_mean(const std::function<Vector(const Vector&)>& fn,
                                    const Sampler& sampler, long n_samples, RngStream& rng);

MonteCarloEstimate monte_carlo_mean(const std::function<Vector(const Vector&)>& fn,
                                    const Distribution& dist, long n_samples, RngStream& rng);

}  // namespace cscgd
