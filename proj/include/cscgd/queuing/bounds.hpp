#pragma once

#include <functional>

#include "cscgd/linalg.hpp"

namespace cscgd::queuing {

/// Largest |grad(y)|^2 seen over the corners of [lo, hi] (when there are at
/// most 2^12 of them) plus `random_points` uniform points from a fixed stream.
/// An estimate of C_f for outer functions without a closed-form bound.
double gradient_norm_sq_sup(const std::function<Vector(const Vector&)>& grad, const Vector& lo, const Vector& hi,
                            int random_points = 4096);

}  // namespace cscgd::queuing
