#include "glshrink/prior_kernel.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace glshrink {

namespace {

std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

double PriorKernel::eval_log_L(double t) const {
  return log_L ? log_L(t) : std::log(L(t));
}

double eval_L(const PriorKernel& kernel, double t) {
  if (!(t > 0.0)) throw std::domain_error("eval_L: t must be > 0");
  const double v = kernel.L(t);
  if (!std::isfinite(v)) throw std::domain_error("eval_L: L(t) not finite");
  return v;
}

PriorKernel tpbn_kernel(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::domain_error("tpbn_kernel: alpha and beta must be > 0");
  if (alpha < 0.5)
    throw std::domain_error("tpbn_kernel: alpha < 1/2 is outside the supported regime");
  const double e = alpha + beta;
  PriorKernel k;
  k.a = alpha;
  k.L = [e](double t) {
    const double r = t / (1.0 + t);
    return e == 1.0 ? r : std::pow(r, e);
  };
  k.log_L = [e](double t) { return e * (std::log(t) - std::log1p(t)); };
  k.name = "tpbn:" + fmt_param(alpha) + ":" + fmt_param(beta);
  k.family_params = {alpha, beta};
  // 1/(1 + l2) ~ Beta(alpha, beta) under this prior
  k.lambda2_sampler = [alpha, beta](RngStream& rng) {
    const double v = rng.next_beta(alpha, beta);
    return 1.0 / v - 1.0;
  };
  return k;
}

PriorKernel horseshoe_kernel() {
  PriorKernel k = tpbn_kernel(0.5, 0.5);
  k.name = "horseshoe";
  return k;
}

PriorKernel strawderman_berger_kernel() {
  PriorKernel k = tpbn_kernel(0.5, 1.0);
  k.name = "strawderman-berger";
  return k;
}

PriorKernel inv_gamma_kernel(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("inv_gamma_kernel: shape must be > 0");
  if (shape < 0.5)
    throw std::domain_error("inv_gamma_kernel: shape < 1/2 is outside the supported regime");
  PriorKernel k;
  k.a = shape;
  k.L = [](double t) { return std::exp(-1.0 / t); };
  k.log_L = [](double t) { return -1.0 / t; };
  k.name = "inv-gamma:" + fmt_param(shape);
  k.family_params = {shape};
  k.lambda2_sampler = [shape](RngStream& rng) { return 1.0 / rng.next_gamma(shape); };
  return k;
}

KernelValidationReport validate_kernel(const PriorKernel& kernel,
                                       const std::vector<double>& grid, double M,
                                       double c0, double t0) {
  if (grid.empty()) throw std::invalid_argument("validate_kernel: empty grid");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument("validate_kernel: grid must be sorted ascending");

  KernelValidationReport report;
  report.declared_M = M;
  report.declared_c0 = c0;
  report.declared_t0 = t0;
  double sup = -std::numeric_limits<double>::infinity();
  double tail_min = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    const double v = eval_L(kernel, t);
    if (v > sup) sup = v;
    if (t >= t0 && v < tail_min) tail_min = v;
  }
  report.sup_L_on_grid = sup;
  report.min_L_tail_on_grid = tail_min;
  report.passed = (sup <= M) && (tail_min >= c0);
  return report;
}

std::vector<double> default_validation_grid() {
  constexpr int kPoints = 400;
  std::vector<double> grid(kPoints);
  const double lo = std::log(1e-8), hi = std::log(1e8);
  for (int i = 0; i < kPoints; ++i)
    grid[i] = std::exp(lo + (hi - lo) * i / (kPoints - 1));
  return grid;
}

PriorKernel parse_kernel(const std::string& name) {
  if (name == "horseshoe") return horseshoe_kernel();
  if (name == "strawderman-berger") return strawderman_berger_kernel();
  const auto parse_num = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("parse_kernel: bad number in '" + name + "'");
    return v;
  };
  if (name.rfind("tpbn:", 0) == 0) {
    const std::string rest = name.substr(5);
    const auto sep = rest.find(':');
    if (sep == std::string::npos)
      throw std::invalid_argument("parse_kernel: expected tpbn:ALPHA:BETA, got '" + name + "'");
    return tpbn_kernel(parse_num(rest.substr(0, sep)), parse_num(rest.substr(sep + 1)));
  }
  if (name.rfind("inv-gamma:", 0) == 0)
    return inv_gamma_kernel(parse_num(name.substr(10)));
  throw std::invalid_argument("parse_kernel: unknown kernel '" + name + "'");
}

}  // namespace glshrink
