#include "glshrink/shrinkage_table.hpp"

#include <cmath>
#include <stdexcept>

namespace glshrink {

ShrinkageTable::ShrinkageTable(const PriorKernel& kernel, double tau, double x_max,
                               int nodes_per_unit, const QuadratureConfig& config)
    : kernel_(kernel), tau_(tau), x_max_(x_max), config_(config) {
  if (!(x_max > 0.0)) throw std::invalid_argument("ShrinkageTable: x_max must be > 0");
  if (nodes_per_unit < 8)
    throw std::invalid_argument("ShrinkageTable: nodes_per_unit must be >= 8");
  // One padded unit past x_max keeps spline end effects out of the
  // queryable range; the left end is clamped with the exact zero slope
  // both functions have at x = 0 (they are even in x).
  const double built_max = x_max + 1.0;
  const int n = static_cast<int>(std::ceil(built_max * nodes_per_unit)) + 1;
  std::vector<double> xs(n), e1(n), lm(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = built_max * i / (n - 1);
    const ShrinkageIntegrals si =
        shrinkage_integrals(kernel_, ShrinkageQuery(xs[i], tau_), config_);
    e1[i] = si.num / si.den;
    lm[i] = std::log(si.den);
  }
  e1mk_ = fit(xs, e1);
  logm_ = fit(xs, lm);
}

// Cubic spline on a uniform grid (Thomas algorithm): clamped with zero
// slope on the left, natural on the right (the padded end).
ShrinkageTable::Spline ShrinkageTable::fit(const std::vector<double>& xs,
                                           const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  Spline sp;
  sp.x0 = xs.front();
  sp.h = xs[1] - xs[0];
  sp.y = ys;
  sp.y2.assign(n, 0.0);
  std::vector<double> u(n, 0.0);
  sp.y2[0] = -0.5;
  u[0] = (3.0 / sp.h) * (ys[1] - ys[0]) / sp.h;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double p = 0.5 * sp.y2[i - 1] + 2.0;
    sp.y2[i] = -0.5 / p;
    const double rhs = (ys[i + 1] - 2.0 * ys[i] + ys[i - 1]) * 3.0 / (sp.h * sp.h);
    u[i] = (rhs - 0.5 * u[i - 1]) / p;
  }
  sp.y2[n - 1] = 0.0;
  for (std::size_t k = n - 1; k-- > 0;) sp.y2[k] = sp.y2[k] * sp.y2[k + 1] + u[k];
  return sp;
}

double ShrinkageTable::Spline::eval(double x) const {
  const std::size_t n = y.size();
  double s = (x - x0) / h;
  std::size_t i = static_cast<std::size_t>(s);
  if (i >= n - 1) i = n - 2;
  const double a = (i + 1) - s;
  const double b = s - i;
  return a * y[i] + b * y[i + 1] +
         ((a * a * a - a) * y2[i] + (b * b * b - b) * y2[i + 1]) * (h * h) / 6.0;
}

double ShrinkageTable::e_one_minus_kappa(double x) const {
  const double ax = std::abs(x);
  if (ax > x_max_)
    return expected_one_minus_kappa(kernel_, ShrinkageQuery(ax, tau_), config_);
  return e1mk_.eval(ax);
}

double ShrinkageTable::log_marginal_rel(double x) const {
  const double ax = std::abs(x);
  if (ax > x_max_) return glshrink::log_marginal_rel(kernel_, ShrinkageQuery(ax, tau_), config_);
  return logm_.eval(ax);
}

}  // namespace glshrink
