#pragma once

#include <variant>
#include <vector>

#include "cscgd/linalg.hpp"

namespace cscgd {

/// Closed convex set that admits an exact Euclidean projection.
///
/// Three shapes are supported: a box, a box intersected with the half-space
/// {u : sum(u) <= cap}, and a Cartesian product of such sets over consecutive
/// coordinate blocks.
class FeasibleSet {
 public:
  struct Box {
    Vector lower;
    Vector upper;
  };
  struct BoxWithSumCap {
    Vector lower;
    Vector upper;
    double cap;
  };
  struct Product {
    std::vector<FeasibleSet> blocks;
  };

  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet box_with_sum_cap(Vector lower, Vector upper, double cap);
  static FeasibleSet product(std::vector<FeasibleSet> blocks);

  Eigen::Index dim() const;

  /// argmin_{u in set} |u - v|^2.
  Vector project(const Vector& v) const;

  bool contains(const Vector& v, double slack = 1e-12) const;

  /// Componentwise bounding box.
  Vector lower() const;
  Vector upper() const;

  /// Squared diameter of the bounding box, an upper bound on D_x.
  double diameter_sq() const;

  /// Projection of the bounding-box midpoint; the default initial iterate.
  Vector center() const;

  const std::variant<Box, BoxWithSumCap, Product>& shape() const { return shape_; }

 private:
  explicit FeasibleSet(std::variant<Box, BoxWithSumCap, Product> shape) : shape_(std::move(shape)) {}

  std::variant<Box, BoxWithSumCap, Product> shape_;
};

/// Projection onto {lower <= u <= upper, sum(u) <= cap} by bisection on the
/// half-space multiplier, polished with the active-set closed form.
Vector project_box_with_sum_cap(const Vector& v, const Vector& lower, const Vector& upper, double cap);

}  // namespace cscgd
