#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "glshrink/shrinkage.hpp"

namespace glshrink {

/// Hyperparameters realized while a rule ran (the plug-in global scale,
/// the estimated non-null proportion).
struct RuleMeta {
  std::optional<double> tau_hat;
  std::optional<double> p_hat;
};

/// Binary rejection vector: psi[i] = 1 rejects the i-th null.
struct DecisionVector {
  std::vector<std::uint8_t> psi;
  RuleMeta meta;
};

struct FixedTauRule {
  double tau = 0.1;
};

struct EmpiricalBayesRule {
  double c1 = 2.0;
  double c2 = 1.0;
};

struct FullBayesRule {
  double alpha_n = 0.1;
  int grid_size = 64;
  /// Prior density on tau over [1/n, alpha_n]; uniform when empty.
  std::function<double(double)> tau_prior;
};

struct DecisionRuleSpec {
  std::variant<FixedTauRule, EmpiricalBayesRule, FullBayesRule> variant;
  PriorKernel kernel;
  double threshold = 0.5;
};

/// psi[i] = 1 iff E(1-kappa | x_i, tau) exceeds the threshold, strict
/// inequality (a value exactly at the threshold is not rejected).
DecisionVector decide_fixed_tau(std::span<const double> data, const PriorKernel& kernel,
                                double tau, double threshold = 0.5,
                                const QuadratureConfig& config = {});

/// Plug-in global scale max{1/n, (1/(c2 n)) * #{|x_i| > sqrt(c1 log n)}}.
/// Requires n >= 2, c1 >= 2, c2 >= 1.
double estimate_tau_eb(std::span<const double> data, double c1 = 2.0, double c2 = 1.0);

DecisionVector decide_eb(std::span<const double> data, const PriorKernel& kernel,
                         double c1 = 2.0, double c2 = 1.0, double threshold = 0.5,
                         const QuadratureConfig& config = {});

/// Normalized posterior weights of tau over a log-spaced grid on
/// [lower, upper]: prior mass (trapezoidal cells) times the product of
/// per-coordinate marginal likelihoods, accumulated in log space.
/// Requires lower < upper and grid_size >= 2.
std::vector<double> tau_posterior_weights(std::span<const double> data,
                                          const PriorKernel& kernel,
                                          const std::function<double(double)>& tau_prior,
                                          double lower, double upper, int grid_size,
                                          const QuadratureConfig& config = {});

std::vector<double> log_spaced_grid(double lower, double upper, int size);

/// Posterior means E(1-kappa_i | X) = sum_g weights[g] E(1-kappa | x_i, tau_g)
/// for an explicit grid; the degenerate one-point grid reduces to the
/// fixed-tau functional.
std::vector<double> fb_posterior_means(std::span<const double> data,
                                       const PriorKernel& kernel,
                                       std::span<const double> tau_grid,
                                       std::span<const double> weights,
                                       const QuadratureConfig& config = {});

/// Full Bayes rule: tau averaged over its posterior on [1/n, alpha_n].
DecisionVector decide_fb(std::span<const double> data, const DecisionRuleSpec& spec,
                         const QuadratureConfig& config = {});

/// Dispatch over the rule variant.
DecisionVector decide(std::span<const double> data, const DecisionRuleSpec& spec,
                      const QuadratureConfig& config = {});

}  // namespace glshrink
