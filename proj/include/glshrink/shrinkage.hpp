#pragma once

#include <cstdint>

#include "glshrink/prior_kernel.hpp"
#include "glshrink/quadrature.hpp"

namespace glshrink {

/// One posterior-shrinkage evaluation point: observation x (sigma = 1
/// units) and global scale tau in (0,1).
struct ShrinkageQuery {
  ShrinkageQuery(double x, double tau);
  double x;
  double tau;
};

/// log of the unnormalized posterior density of the shrinkage coefficient
/// kappa = 1/(1 + l2 tau^2) given x:
///   kappa^(a-1/2) (1-kappa)^(-a-1) L((1/tau^2)(1/kappa - 1)) exp((1-kappa) x^2 / 2).
/// kappa must lie strictly inside (0,1).
double log_posterior_kappa_density_unnorm(const PriorKernel& kernel,
                                          const ShrinkageQuery& query, double kappa);

/// Both shrinkage integrals from one quadrature pass, with the common
/// factor exp(x^2/2) removed so no intermediate can overflow:
///   den = int (1+t tau^2)^(-1/2) t^(-a-1) L(t) exp((x^2/2)(w(t)-1)) dt
///   num = int w(t) * (den integrand) dt,  w(t) = t tau^2 / (1 + t tau^2).
/// E(1-kappa | x, tau) = num / den.
struct ShrinkageIntegrals {
  double num = 0.0;
  double den = 0.0;
};
ShrinkageIntegrals shrinkage_integrals(const PriorKernel& kernel,
                                       const ShrinkageQuery& query,
                                       const QuadratureConfig& config = {});

/// Posterior mean of 1 - kappa; strictly inside (0,1).
double expected_one_minus_kappa(const PriorKernel& kernel, const ShrinkageQuery& query,
                                const QuadratureConfig& config = {});

/// Complement, computed from the same two integrals.
double expected_kappa(const PriorKernel& kernel, const ShrinkageQuery& query,
                      const QuadratureConfig& config = {});

/// log of den above. Equal to the log marginal density of x given tau up
/// to terms that do not depend on tau, which is all the tau-posterior
/// needs.
double log_marginal_rel(const PriorKernel& kernel, const ShrinkageQuery& query,
                        const QuadratureConfig& config = {});

struct OracleEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t n_draws = 0;
};

/// Independent stochastic check of expected_one_minus_kappa:
/// self-normalized importance sampling over l2 ~ pi1 with the identity
///   E(1-kappa|x,tau) = E[(1-kappa) N(x; 0, 1+tau^2 l2)] / E[N(x; 0, 1+tau^2 l2)],
/// delete-one jackknife standard error. Reproducible given the seed and
/// independent of thread scheduling (counter-based streams per draw).
/// Requires a kernel with a sampler and n_draws >= 10^4.
OracleEstimate importance_oracle(const PriorKernel& kernel, const ShrinkageQuery& query,
                                 std::int64_t n_draws, std::uint64_t seed);

/// Rate function tau * L(1/tau^2) / sqrt(log(1/tau^2)) governing the
/// per-null rejection probability for a = 1/2 (constants omitted).
/// Requires 0 < tau < 1/e.
double type1_bound_rate(const PriorKernel& kernel, double tau);

/// log of the upper-rate function for a > 1/2:
///   x^2/2 + 2a log(tau)                    for a in (1/2, 1)
///   x^2/2 + 2 log(tau) + log(log(1/tau))   for a >= 1.
/// Shape checks only; constants omitted. Requires kernel.a > 1/2 and
/// 0 < tau < 1/e.
double large_a_upper_rate(const PriorKernel& kernel, double x, double tau);

}  // namespace glshrink
