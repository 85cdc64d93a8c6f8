#include "cscgd/feasible_set.hpp"

#include <cmath>

#include "cscgd/errors.hpp"

namespace cscgd {
namespace {

void check_bounds(const Vector& lower, const Vector& upper) {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw ConfigError("feasible set bounds must be non-empty and of equal length");
  }
  if (!lower.allFinite() || !upper.allFinite()) throw ConfigError("feasible set bounds must be finite");
  if ((lower.array() > upper.array()).any()) throw ConfigError("feasible set is empty: lower > upper");
}

Vector clamp(const Vector& v, const Vector& lower, const Vector& upper) {
  return v.cwiseMax(lower).cwiseMin(upper);
}

}  // namespace

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  check_bounds(lower, upper);
  return FeasibleSet(Box{std::move(lower), std::move(upper)});
}

FeasibleSet FeasibleSet::box_with_sum_cap(Vector lower, Vector upper, double cap) {
  check_bounds(lower, upper);
  if (!std::isfinite(cap)) throw ConfigError("sum cap must be finite");
  if (lower.sum() > cap) throw ConfigError("feasible set is empty: sum(lower) > cap");
  return FeasibleSet(BoxWithSumCap{std::move(lower), std::move(upper), cap});
}

FeasibleSet FeasibleSet::product(std::vector<FeasibleSet> blocks) {
  if (blocks.empty()) throw ConfigError("product set needs at least one block");
  return FeasibleSet(Product{std::move(blocks)});
}

Eigen::Index FeasibleSet::dim() const {
  if (const auto* b = std::get_if<Box>(&shape_)) return b->lower.size();
  if (const auto* s = std::get_if<BoxWithSumCap>(&shape_)) return s->lower.size();
  Eigen::Index n = 0;
  for (const auto& blk : std::get<Product>(shape_).blocks) n += blk.dim();
  return n;
}

Vector FeasibleSet::project(const Vector& v) const {
  if (v.size() != dim()) throw ConfigError("projection input has the wrong dimension");
  if (!v.allFinite()) throw NumericalError("projection input is not finite", "project");
  if (const auto* b = std::get_if<Box>(&shape_)) return clamp(v, b->lower, b->upper);
  if (const auto* s = std::get_if<BoxWithSumCap>(&shape_)) {
    return project_box_with_sum_cap(v, s->lower, s->upper, s->cap);
  }
  Vector out(v.size());
  Eigen::Index offset = 0;
  for (const auto& blk : std::get<Product>(shape_).blocks) {
    const auto n = blk.dim();
    out.segment(offset, n) = blk.project(v.segment(offset, n));
    offset += n;
  }
  return out;
}

bool FeasibleSet::contains(const Vector& v, double slack) const {
  if (v.size() != dim() || !v.allFinite()) return false;
  if (const auto* b = std::get_if<Box>(&shape_)) {
    return ((v.array() >= b->lower.array() - slack) && (v.array() <= b->upper.array() + slack)).all();
  }
  if (const auto* s = std::get_if<BoxWithSumCap>(&shape_)) {
    return ((v.array() >= s->lower.array() - slack) && (v.array() <= s->upper.array() + slack)).all() &&
           v.sum() <= s->cap + slack * std::max(1.0, std::abs(s->cap));
  }
  Eigen::Index offset = 0;
  for (const auto& blk : std::get<Product>(shape_).blocks) {
    const auto n = blk.dim();
    if (!blk.contains(v.segment(offset, n), slack)) return false;
    offset += n;
  }
  return true;
}

Vector FeasibleSet::lower() const {
  if (const auto* b = std::get_if<Box>(&shape_)) return b->lower;
  if (const auto* s = std::get_if<BoxWithSumCap>(&shape_)) return s->lower;
  Vector out(dim());
  Eigen::Index offset = 0;
  for (const auto& blk : std::get<Product>(shape_).blocks) {
    out.segment(offset, blk.dim()) = blk.lower();
    offset += blk.dim();
  }
  return out;
}

Vector FeasibleSet::upper() const {
  if (const auto* b = std::get_if<Box>(&shape_)) return b->upper;
  if (const auto* s = std::get_if<BoxWithSumCap>(&shape_)) return s->upper;
  Vector out(dim());
  Eigen::Index offset = 0;
  for (const auto& blk : std::get<Product>(shape_).blocks) {
    out.segment(offset, blk.dim()) = blk.upper();
    offset += blk.dim();
  }
  return out;
}

double FeasibleSet::diameter_sq() const { return (upper() - lower()).squaredNorm(); }

Vector FeasibleSet::center() const { return project(0.5 * (lower() + upper())); }

Vector project_box_with_sum_cap(const Vector& v, const Vector& lower, const Vector& upper, double cap) {
  Vector u = clamp(v, lower, upper);
  if (u.sum() <= cap) return u;

  // s(nu) = sum(clamp(v - nu)) is non-increasing; s(hi) = sum(lower) <= cap.
  double lo = 0.0;
  double hi = (v - lower).maxCoeff();
  const double scale = std::max({1.0, std::abs(hi), std::abs(cap)});
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * scale; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (clamp(v.array() - mid, lower, upper).sum() > cap) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Vector best = clamp(v.array() - hi, lower, upper);

  // On the active set found by bisection the multiplier has a closed form.
  const Vector shifted = v.array() - hi;
  double fixed = 0.0;
  double free_sum = 0.0;
  int n_free = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (shifted[i] <= lower[i]) {
      fixed += lower[i];
    } else if (shifted[i] >= upper[i]) {
      fixed += upper[i];
    } else {
      free_sum += v[i];
      ++n_free;
    }
  }
  if (n_free > 0) {
    const double nu = (free_sum + fixed - cap) / n_free;
    if (nu >= 0.0) {
      Vector polished = clamp(v.array() - nu, lower, upper);
      if (polished.sum() <= cap + 1e-13 * scale) best = polished;
    }
  }
  return best;
}

}  // namespace cscgd
