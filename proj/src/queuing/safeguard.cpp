#include "cscgd/queuing/safeguard.hpp"

#include <cmath>

namespace cscgd::queuing {

Eval2 safeguarded_ratio(double x, double y, double eps) {
  if (y < 1.0 - eps) {
    const double inv = 1.0 / (1.0 - y);
    return {x * inv, inv, x * inv * inv};
  }
  const double e2 = eps * eps;
  return {x * (y - 1.0 + 2.0 * eps) / e2, (y - 1.0 + 2.0 * eps) / e2, x / e2};
}

Eval1 safeguarded_inverse(double d, double eps) {
  if (d > eps) return {1.0 / d, -1.0 / (d * d)};
  const double e2 = eps * eps;
  return {(2.0 * eps - d) / e2, -1.0 / e2};
}

Eval1 safeguarded_log(double x, double floor) {
  if (x >= floor) return {std::log(x), 1.0 / x};
  const double dx = x - floor;
  return {std::log(floor) + dx / floor - dx * dx / (2.0 * floor * floor), 1.0 / floor - dx / (floor * floor)};
}

Eval1 sigmoid(double t) {
  // Evaluate on the side that cannot overflow.
  double s;
  if (t >= 0.0) {
    s = 1.0 / (1.0 + std::exp(-t));
  } else {
    const double e = std::exp(t);
    s = e / (1.0 + e);
  }
  return {s, s * (1.0 - s)};
}

}  // namespace cscgd::queuing
