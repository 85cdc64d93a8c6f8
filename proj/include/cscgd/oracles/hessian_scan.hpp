#pragma once

#include <functional>
#include <string>
#include <vector>

namespace cscgd::oracles {

struct Grid2d {
  double x_lo;
  double x_hi;
  int nx;
  double y_lo;
  double y_hi;
  int ny;
};

struct HessianCell {
  double x;
  double y;
  double min_eig;
};

struct HessianScan {
  std::vector<HessianCell> cells;  ///< row-major: x outer, y inner
  double min_eigenvalue = 0.0;
  double argmin_x = 0.0;
  double argmin_y = 0.0;
  /// min_eigenvalue >= -1e-8.
  bool psd = false;
  /// Header `lambda,p,min_eig`, one row per cell in scan order.
  std::string heatmap_csv() const;
};

/// Smallest eigenvalue of the 2x2 symmetric matrix [[a, b], [b, c]].
double min_eigenvalue_2x2(double a, double b, double c);

/// Central-difference Hessian of fn at every grid node, steps 1e-4 times
/// each axis range. Errors raised by fn are rethrown naming the cell.
HessianScan hessian_psd_scan(const std::function<double(double, double)>& fn, const Grid2d& grid);

/// U(lambda, p) = lambda E[b^-2] / (2 (1 - lambda E[b^-1])) - weight log(lambda),
/// b = B log(1 + p zeta), zeta chi-squared with `dof` degrees of freedom truncated below at `floor`.
/// Expectations use a fixed composite Gauss-Legendre rule so the function is
/// smooth in (lambda, p); a second, finer rule bounds the quadrature error.
class ErgodicSummand {
 public:
  ErgodicSummand(double bandwidth, int dof, double floor, double log_weight = 0.1);

  double operator()(double lambda, double p) const;

  /// (E[1/b], E[1/b^2]) at power p.
  std::pair<double, double> inverse_rate_moments(double p) const;

 private:
  struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;  // quadrature weight times normalized density
  };
  static Rule make_rule(int dof, double floor, int panels, int order);
  std::pair<double, double> moments(const Rule& rule, double p) const;

  double bandwidth_;
  double log_weight_;
  Rule coarse_;
  Rule fine_;
};

}  // namespace cscgd::oracles
