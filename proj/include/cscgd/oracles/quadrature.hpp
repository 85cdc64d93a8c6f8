#pragma once

#include <functional>
#include <map>
#include <vector>

#include "cscgd/distributions.hpp"

namespace cscgd::oracles {

struct QuadratureMoments {
  Distribution distribution;
  std::vector<int> orders;
  std::map<int, double> values;
  double abs_error = 0.0;  ///< largest error estimate over the requested orders
};

/// E[X^k] for each requested order by adaptive Gauss-Kronrod quadrature of
/// the (truncated) density. The densities are written out here rather than
/// taken from the samplers. Throws NumericalError if a relative error
/// estimate exceeds 1e-10.
QuadratureMoments quadrature_moments(const Distribution& dist, const std::vector<int>& orders);

/// E[fn(X)] for a scalar family, same method and error contract.
double quadrature_expectation(const std::function<double(double)>& fn, const Distribution& dist,
                              double* abs_error = nullptr);

}  // namespace cscgd::oracles
