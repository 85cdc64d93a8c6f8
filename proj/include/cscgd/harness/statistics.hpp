#pragma once

#include <vector>

namespace cscgd::harness {

double mean(const std::vector<double>& v);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_std(const std::vector<double>& v);
double standard_error(const std::vector<double>& v);

struct MannKendall {
  double s = 0.0;      ///< sum of sign(x_j - x_i) over i < j
  double z = 0.0;      ///< continuity-corrected normal score
  double p_value = 1.0;  ///< two-sided
};

/// Mann-Kendall trend test with the tie-corrected variance.
MannKendall mann_kendall(const std::vector<double>& series);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;   ///< 95% Student-t interval
  double ci_high = 0.0;
  /// True when some per-horizon mean was below 1e-12 and was floored.
  bool floored = false;
};

constexpr double kPlotFloor = 1e-12;

/// Least-squares fit of log(mean over seeds) against log(T).
/// values[k] holds one quantity per seed at horizons[k]. Needs at least four
/// horizons and `min_seeds` values at each.
RateFit rate_fit(const std::vector<double>& horizons, const std::vector<std::vector<double>>& values,
                 int min_seeds = 10);

}  // namespace cscgd::harness
