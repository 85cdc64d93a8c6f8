#include "cscgd/queuing/bounds.hpp"

#include <algorithm>

#include "cscgd/rng.hpp"

namespace cscgd::queuing {

double gradient_norm_sq_sup(const std::function<Vector(const Vector&)>& grad, const Vector& lo, const Vector& hi,
                            int random_points) {
  const Eigen::Index m = lo.size();
  double best = 0.0;
  if (m <= 12) {
    for (long mask = 0; mask < (1L << m); ++mask) {
      Vector y(m);
      for (Eigen::Index k = 0; k < m; ++k) y[k] = (mask >> k) & 1 ? hi[k] : lo[k];
      best = std::max(best, grad(y).squaredNorm());
    }
  }
  RngStream rng(0x0b0d5, 1);
  for (int s = 0; s < random_points; ++s) {
    Vector y(m);
    for (Eigen::Index k = 0; k < m; ++k) y[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform();
    best = std::max(best, grad(y).squaredNorm());
  }
  return best;
}

}  // namespace cscgd::queuing
