#include "cscgd/harness/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "cscgd/errors.hpp"

namespace cscgd::harness {

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double standard_error(const std::vector<double>& v) {
  return v.empty() ? 0.0 : sample_std(v) / std::sqrt(static_cast<double>(v.size()));
}

MannKendall mann_kendall(const std::vector<double>& x) {
  MannKendall out;
  const std::size_t n = x.size();
  if (n < 3) return out;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.s += (x[j] > x[i]) - (x[j] < x[i]);
    }
  }
  std::map<double, int> ties;
  for (double v : x) ++ties[v];
  const double nn = static_cast<double>(n);
  double var = nn * (nn - 1) * (2 * nn + 5);
  for (const auto& [v, t] : ties) var -= static_cast<double>(t) * (t - 1) * (2.0 * t + 5);
  var /= 18.0;
  if (var <= 0) return out;
  if (out.s > 0) out.z = (out.s - 1) / std::sqrt(var);
  if (out.s < 0) out.z = (out.s + 1) / std::sqrt(var);
  out.p_value = 2.0 * boost::math::cdf(boost::math::complement(boost::math::normal(), std::abs(out.z)));
  return out;
}

RateFit rate_fit(const std::vector<double>& horizons, const std::vector<std::vector<double>>& values,
                 int min_seeds) {
  if (horizons.size() < 4 || values.size() != horizons.size()) {
    throw ConfigError("rate_fit needs at least four horizons with one value set each");
  }
  RateFit fit;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    if (static_cast<int>(values[k].size()) < min_seeds) throw ConfigError("rate_fit needs more seeds per horizon");
    if (!(horizons[k] > 0)) throw ConfigError("rate_fit horizons must be positive");
    double m = mean(values[k]);
    if (!(m >= kPlotFloor)) {
      m = kPlotFloor;
      fit.floored = true;
    }
    lx.push_back(std::log(horizons[k]));
    ly.push_back(std::log(m));
  }
  const double n = static_cast<double>(lx.size());
  const double mx = mean(lx);
  const double my = mean(ly);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (!(sxx > 0)) throw ConfigError("rate_fit horizons must not all be equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const double r = ly[k] - fit.intercept - fit.slope * lx[k];
    rss += r * r;
  }
  fit.slope_se = std::sqrt(rss / (n - 2) / sxx);
  const double t = boost::math::quantile(boost::math::students_t(n - 2), 0.975);
  fit.ci_low = fit.slope - t * fit.slope_se;
  fit.ci_high = fit.slope + t * fit.slope_se;
  return fit;
}

}  // namespace cscgd::harness
