#include "cscgd/penalty.hpp"

#include <algorithm>
#include <cmath>

#include "cscgd/errors.hpp"

namespace cscgd {

void PenaltyParams::validate() const {
  if (!(std::isfinite(gamma) && std::isfinite(c_ell))) throw ConfigError("penalty parameters must be finite");
  if (gamma < 0.0) throw ConfigError("penalty gamma must be non-negative");
  if (!(c_ell > 0.0)) throw ConfigError("penalty c_ell must be positive");
  if (!(gamma < c_ell)) throw ConfigError("penalty requires gamma < c_ell");
}

double penalty_branch(double x, double c_ell) {
  if (x < 0.0) return 0.0;
  if (x <= c_ell) return 0.5 * x * x;
  return c_ell * x - 0.5 * c_ell * c_ell;
}

double penalty_branch_derivative(double x, double c_ell) { return std::clamp(x, 0.0, c_ell); }

double penalty_value(const Vector& w, const PenaltyParams& params) {
  params.validate();
  if (!w.allFinite()) throw NumericalError("non-finite penalty argument", "penalty_value");
  double total = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) total += penalty_branch(w[j] + params.gamma, params.c_ell);
  return total;
}

Vector penalty_gradient(const Vector& w, const PenaltyParams& params) {
  params.validate();
  if (!w.allFinite()) throw NumericalError("non-finite penalty argument", "penalty_gradient");
  Vector out(w.size());
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    out[j] = penalty_branch_derivative(w[j] + params.gamma, params.c_ell);
  }
  return out;
}

}  // namespace cscgd
