#include "cscgd/oracles/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cscgd/errors.hpp"

namespace cscgd::oracles {

namespace {

constexpr double kRelTol = 1e-10;

struct Density {
  std::function<double(double)> pdf;  // unnormalized on the support
  double lower;
  double upper;
  double scale;  // typical width, used to split the half-line
};

Density density_of(const Distribution& dist) {
  if (const auto* d = std::get_if<ExponentialMean>(&dist)) {
    const double m = d->mean;
    return {[m](double x) { return std::exp(-x / m) / m; }, 0.0, INFINITY, m};
  }
  if (const auto* d = std::get_if<TruncatedExponential>(&dist)) {
    const double m = d->mean;
    return {[m](double x) { return std::exp(-x / m) / m; }, d->lower, d->upper, m};
  }
  if (const auto* d = std::get_if<TruncatedChiSquared>(&dist)) {
    const boost::math::chi_squared chi(d->dof);
    return {[chi](double x) { return boost::math::pdf(chi, x); }, d->lower, INFINITY, 2.0 * d->dof};
  }
  throw ConfigError("quadrature oracle supports exponential and chi-squared families only");
}

double integrate(const std::function<double(double)>& fn, const Density& d, double* err) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  double e1 = 0.0;
  double e2 = 0.0;
  double total;
  if (std::isinf(d.upper)) {
    const double split = d.lower + 40.0 * d.scale;
    total = Rule::integrate(fn, d.lower, split, 15, 1e-14, &e1);
    total += Rule::integrate(fn, split, std::numeric_limits<double>::infinity(), 15, 1e-14, &e2);
  } else {
    total = Rule::integrate(fn, d.lower, d.upper, 15, 1e-14, &e1);
  }
  *err = e1 + e2;
  return total;
}

double checked(double value, double err, const std::string& what) {
  if (!std::isfinite(value) || err > kRelTol * std::max(std::abs(value), 1e-300)) {
    throw NumericalError("quadrature error estimate too large for " + what, "quadrature");
  }
  return value;
}

}  // namespace

double quadrature_expectation(const std::function<double(double)>& fn, const Distribution& dist, double* abs_error) {
  const Density d = density_of(dist);
  double err_z = 0.0;
  const double z = checked(integrate(d.pdf, d, &err_z), err_z, "normalizer");
  double err = 0.0;
  const double num = integrate([&](double x) { return fn(x) * d.pdf(x); }, d, &err);
  const double value = num / z;
  const double abs_err = err / z + std::abs(value) * err_z / z;
  if (!std::isfinite(value) || abs_err > kRelTol * std::max(std::abs(value), 1e-300) + 1e-300) {
    throw NumericalError("quadrature error estimate too large", "quadrature");
  }
  if (abs_error) *abs_error = abs_err;
  return value;
}

QuadratureMoments quadrature_moments(const Distribution& dist, const std::vector<int>& orders) {
  QuadratureMoments out{dist, orders, {}, 0.0};
  for (int k : orders) {
    double err = 0.0;
    out.values[k] = quadrature_expectation([k](double x) { return std::pow(x, k); }, dist, &err);
    out.abs_error = std::max(out.abs_error, err);
  }
  return out;
}

}  // namespace cscgd::oracles
