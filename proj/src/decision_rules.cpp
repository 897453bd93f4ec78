#include "glshrink/decision_rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace glshrink {

DecisionVector decide_fixed_tau(std::span<const double> data, const PriorKernel& kernel,
                                double tau, double threshold,
                                const QuadratureConfig& config) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::domain_error("decide_fixed_tau: tau must lie in (0,1)");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::domain_error("decide_fixed_tau: threshold must lie in (0,1)");
  DecisionVector out;
  out.psi.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double e = expected_one_minus_kappa(kernel, ShrinkageQuery(data[i], tau), config);
    out.psi[i] = e > threshold ? 1 : 0;
  }
  return out;
}

double estimate_tau_eb(std::span<const double> data, double c1, double c2) {
  const std::size_t n = data.size();
  if (n < 2) throw std::invalid_argument("estimate_tau_eb: need n >= 2");
  if (!(c1 >= 2.0)) throw std::invalid_argument("estimate_tau_eb: c1 must be >= 2");
  if (!(c2 >= 1.0)) throw std::invalid_argument("estimate_tau_eb: c2 must be >= 1");
  const double cutoff = std::sqrt(c1 * std::log(static_cast<double>(n)));
  std::size_t count = 0;
  for (double x : data)
    if (std::abs(x) > cutoff) ++count;
  return std::max(1.0 / static_cast<double>(n),
                  static_cast<double>(count) / (c2 * static_cast<double>(n)));
}

DecisionVector decide_eb(std::span<const double> data, const PriorKernel& kernel,
                         double c1, double c2, double threshold,
                         const QuadratureConfig& config) {
  const double tau_hat = estimate_tau_eb(data, c1, c2);
  DecisionVector out = decide_fixed_tau(data, kernel, tau_hat, threshold, config);
  out.meta.tau_hat = tau_hat;
  return out;
}

std::vector<double> log_spaced_grid(double lower, double upper, int size) {
  if (!(lower > 0.0) || !(upper > lower))
    throw std::invalid_argument("log_spaced_grid: need 0 < lower < upper");
  if (size < 2) throw std::invalid_argument("log_spaced_grid: need size >= 2");
  std::vector<double> grid(size);
  const double llo = std::log(lower), lhi = std::log(upper);
  for (int i = 0; i < size; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * i / (size - 1));
  grid.front() = lower;
  grid.back() = upper;
  return grid;
}

namespace {

// Trapezoidal cell widths for an arbitrary sorted grid.
std::vector<double> trapezoid_widths(const std::vector<double>& grid) {
  const std::size_t m = grid.size();
  std::vector<double> w(m, 0.0);
  for (std::size_t g = 0; g < m; ++g) {
    const double left = g == 0 ? grid[0] : grid[g - 1];
    const double right = g + 1 == m ? grid[m - 1] : grid[g + 1];
    w[g] = 0.5 * (right - left);
  }
  return w;
}

}  // namespace

std::vector<double> tau_posterior_weights(std::span<const double> data,
                                          const PriorKernel& kernel,
                                          const std::function<double(double)>& tau_prior,
                                          double lower, double upper, int grid_size,
                                          const QuadratureConfig& config) {
  if (!(lower > 0.0) || !(upper > lower) || !(upper < 1.0))
    throw std::invalid_argument("tau_posterior_weights: need 0 < lower < upper < 1");
  if (grid_size < 2)
    throw std::invalid_argument("tau_posterior_weights: degenerate grid");

  const std::vector<double> grid = log_spaced_grid(lower, upper, grid_size);
  const std::vector<double> cells = trapezoid_widths(grid);

  std::vector<double> log_w(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double prior = tau_prior ? tau_prior(grid[g]) : 1.0;
    if (!(prior >= 0.0))
      throw std::invalid_argument("tau_posterior_weights: prior density must be >= 0");
    double lw = prior > 0.0 ? std::log(prior) + std::log(cells[g])
                            : -std::numeric_limits<double>::infinity();
    for (double x : data)
      lw += log_marginal_rel(kernel, ShrinkageQuery(x, grid[g]), config);
    log_w[g] = lw;
  }
  const double m = *std::max_element(log_w.begin(), log_w.end());
  double total = 0.0;
  std::vector<double> weights(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    weights[g] = std::exp(log_w[g] - m);
    total += weights[g];
  }
  for (double& w : weights) w /= total;
  return weights;
}

std::vector<double> fb_posterior_means(std::span<const double> data,
                                       const PriorKernel& kernel,
                                       std::span<const double> tau_grid,
                                       std::span<const double> weights,
                                       const QuadratureConfig& config) {
  if (tau_grid.size() != weights.size() || tau_grid.empty())
    throw std::invalid_argument("fb_posterior_means: grid/weights mismatch");
  std::vector<double> means(data.size(), 0.0);
  for (std::size_t g = 0; g < tau_grid.size(); ++g) {
    if (weights[g] == 0.0) continue;
    for (std::size_t i = 0; i < data.size(); ++i)
      means[i] += weights[g] *
                  expected_one_minus_kappa(kernel, ShrinkageQuery(data[i], tau_grid[g]), config);
  }
  return means;
}

DecisionVector decide_fb(std::span<const double> data, const DecisionRuleSpec& spec,
                         const QuadratureConfig& config) {
  const auto* fb = std::get_if<FullBayesRule>(&spec.variant);
  if (fb == nullptr) throw std::invalid_argument("decide_fb: spec is not a FullBayes rule");
  const std::size_t n = data.size();
  if (n < 2) throw std::invalid_argument("decide_fb: need n >= 2");
  const double lower = 1.0 / static_cast<double>(n);
  if (!(fb->alpha_n > lower && fb->alpha_n < 1.0))
    throw std::invalid_argument("decide_fb: alpha_n must lie in (1/n, 1)");
  if (fb->grid_size < 16)
    throw std::invalid_argument("decide_fb: grid_size must be >= 16");
  if (!(spec.threshold > 0.0 && spec.threshold < 1.0))
    throw std::domain_error("decide_fb: threshold must lie in (0,1)");

  const std::vector<double> grid = log_spaced_grid(lower, fb->alpha_n, fb->grid_size);
  const std::vector<double> weights = tau_posterior_weights(
      data, spec.kernel, fb->tau_prior, lower, fb->alpha_n, fb->grid_size, config);
  const std::vector<double> means =
      fb_posterior_means(data, spec.kernel, grid, weights, config);

  DecisionVector out;
  out.psi.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.psi[i] = means[i] > spec.threshold ? 1 : 0;
  return out;
}

DecisionVector decide(std::span<const double> data, const DecisionRuleSpec& spec,
                      const QuadratureConfig& config) {
  if (const auto* ft = std::get_if<FixedTauRule>(&spec.variant))
    return decide_fixed_tau(data, spec.kernel, ft->tau, spec.threshold, config);
  if (const auto* eb = std::get_if<EmpiricalBayesRule>(&spec.variant))
    return decide_eb(data, spec.kernel, eb->c1, eb->c2, spec.threshold, config);
  return decide_fb(data, spec, config);
}

}  // namespace glshrink
