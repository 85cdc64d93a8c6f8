#include "cscgd/oracles/hessian_scan.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "cscgd/errors.hpp"

namespace cscgd::oracles {

std::string HessianScan::heatmap_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "lambda,p,min_eig\n";
  for (const auto& c : cells) os << c.x << ',' << c.y << ',' << c.min_eig << '\n';
  return os.str();
}

double min_eigenvalue_2x2(double a, double b, double c) {
  const double mid = 0.5 * (a + c);
  const double rad = std::hypot(0.5 * (a - c), b);
  return mid - rad;
}

HessianScan hessian_psd_scan(const std::function<double(double, double)>& fn, const Grid2d& grid) {
  if (grid.nx < 1 || grid.ny < 1 || grid.x_hi < grid.x_lo || grid.y_hi < grid.y_lo) {
    throw ConfigError("hessian scan: invalid grid");
  }
  const double hx = 1e-4 * (grid.x_hi - grid.x_lo > 0 ? grid.x_hi - grid.x_lo : 1.0);
  const double hy = 1e-4 * (grid.y_hi - grid.y_lo > 0 ? grid.y_hi - grid.y_lo : 1.0);
  HessianScan out;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.nx; ++i) {
    const double x = grid.nx == 1 ? grid.x_lo : grid.x_lo + (grid.x_hi - grid.x_lo) * i / (grid.nx - 1);
    for (int j = 0; j < grid.ny; ++j) {
      const double y = grid.ny == 1 ? grid.y_lo : grid.y_lo + (grid.y_hi - grid.y_lo) * j / (grid.ny - 1);
      double eig;
      try {
        const double f0 = fn(x, y);
        const double fxx = (fn(x + hx, y) - 2.0 * f0 + fn(x - hx, y)) / (hx * hx);
        const double fyy = (fn(x, y + hy) - 2.0 * f0 + fn(x, y - hy)) / (hy * hy);
        const double fxy =
            (fn(x + hx, y + hy) - fn(x + hx, y - hy) - fn(x - hx, y + hy) + fn(x - hx, y - hy)) / (4.0 * hx * hy);
        eig = min_eigenvalue_2x2(fxx, fxy, fyy);
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "hessian scan failed at cell (" << x << ", " << y << "): " << e.what();
        throw NumericalError(os.str(), "hessian_psd_scan");
      }
      out.cells.push_back({x, y, eig});
      if (eig < out.min_eigenvalue) {
        out.min_eigenvalue = eig;
        out.argmin_x = x;
        out.argmin_y = y;
      }
    }
  }
  out.psd = out.min_eigenvalue >= -1e-8;
  return out;
}

ErgodicSummand::Rule ErgodicSummand::make_rule(int dof, double floor, int panels, int order) {
  const boost::math::chi_squared chi(dof);
  const double upper = boost::math::quantile(boost::math::complement(chi, 1e-18));
  const double tail = boost::math::cdf(boost::math::complement(chi, floor));
  std::vector<double> x;
  std::vector<double> w;
  if (order == 20) {
    x.assign(boost::math::quadrature::gauss<double, 20>::abscissa().begin(),
             boost::math::quadrature::gauss<double, 20>::abscissa().end());
    w.assign(boost::math::quadrature::gauss<double, 20>::weights().begin(),
             boost::math::quadrature::gauss<double, 20>::weights().end());
  } else {
    x.assign(boost::math::quadrature::gauss<double, 30>::abscissa().begin(),
             boost::math::quadrature::gauss<double, 30>::abscissa().end());
    w.assign(boost::math::quadrature::gauss<double, 30>::weights().begin(),
             boost::math::quadrature::gauss<double, 30>::weights().end());
  }
  // Boost stores the nonnegative half of a symmetric rule; x[0] = 0 for even orders is absent.
  Rule rule;
  const double width = (upper - floor) / panels;
  for (int k = 0; k < panels; ++k) {
    const double a = floor + k * width;
    const double mid = a + 0.5 * width;
    const double half = 0.5 * width;
    for (std::size_t q = 0; q < x.size(); ++q) {
      for (int sign : {-1, 1}) {
        if (x[q] == 0.0 && sign < 0) continue;
        const double node = mid + sign * half * x[q];
        rule.nodes.push_back(node);
        rule.weights.push_back(half * w[q] * boost::math::pdf(chi, node) / tail);
      }
    }
  }
  return rule;
}

ErgodicSummand::ErgodicSummand(double bandwidth, int dof, double floor, double log_weight)
    : bandwidth_(bandwidth),
      log_weight_(log_weight),
      coarse_(make_rule(dof, floor, 48, 20)),
      fine_(make_rule(dof, floor, 64, 30)) {
  if (!(bandwidth > 0) || dof < 1 || !(floor > 0)) throw ConfigError("ergodic summand: invalid parameters");
}

std::pair<double, double> ErgodicSummand::moments(const Rule& rule, double p) const {
  double e1 = 0.0;
  double e2 = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double inv = 1.0 / (bandwidth_ * std::log1p(p * rule.nodes[k]));
    e1 += rule.weights[k] * inv;
    e2 += rule.weights[k] * inv * inv;
  }
  return {e1, e2};
}

std::pair<double, double> ErgodicSummand::inverse_rate_moments(double p) const {
  const auto c = moments(coarse_, p);
  const auto f = moments(fine_, p);
  if (std::abs(c.first - f.first) > 1e-11 * std::abs(f.first) ||
      std::abs(c.second - f.second) > 1e-11 * std::abs(f.second)) {
    throw NumericalError("quadrature rules disagree", "ergodic_summand");
  }
  return c;
}

double ErgodicSummand::operator()(double lambda, double p) const {
  if (!(lambda > 0) || !(p > 0)) throw DomainError("ergodic summand: lambda and p must be positive");
  const auto [e1, e2] = inverse_rate_moments(p);
  const double slack = 1.0 - lambda * e1;
  if (!(slack > 0)) throw DomainError("ergodic summand: queue is unstable");
  return lambda * e2 / (2.0 * slack) - log_weight_ * std::log(lambda);
}

}  // namespace cscgd::oracles
