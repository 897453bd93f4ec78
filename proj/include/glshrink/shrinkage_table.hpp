#pragma once

#include <memory>
#include <vector>

#include "glshrink/shrinkage.hpp"

namespace glshrink {

/// Tabulated posterior functionals for one (kernel, tau): cubic splines
/// over |x| of E(1-kappa | x, tau) and of the relative log marginal.
/// Both are even in x and smooth, so a fine uniform spline reproduces the
/// quadrature values to well below quadrature tolerance; queries beyond
/// the tabulated range fall back to direct quadrature. Immutable after
/// construction and safe to share across threads.
class ShrinkageTable {
 public:
  ShrinkageTable(const PriorKernel& kernel, double tau, double x_max,
                 int nodes_per_unit = 64, const QuadratureConfig& config = {});

  double e_one_minus_kappa(double x) const;
  double log_marginal_rel(double x) const;

  double tau() const { return tau_; }
  double x_max() const { return x_max_; }

 private:
  struct Spline {
    double x0 = 0.0, h = 1.0;
    std::vector<double> y;
    std::vector<double> y2;  // second derivatives
    double eval(double x) const;
  };
  static Spline fit(const std::vector<double>& xs, const std::vector<double>& ys);

  PriorKernel kernel_;
  double tau_;
  double x_max_;
  QuadratureConfig config_;
  Spline e1mk_;
  Spline logm_;
};

}  // namespace glshrink
