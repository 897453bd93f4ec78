#pragma once

#include <functional>
#include <string>
#include <vector>

#include "glshrink/rng.hpp"

namespace glshrink {

/// A local-variance prior in the polynomial-tail family
///   pi1(l2) = K * (l2)^(-a-1) * L(l2),
/// identified by the exponent `a` and the slowly varying factor `L`.
/// The normalizer K is never materialized: every posterior functional in
/// this library is a ratio in which K cancels.
///
/// The horseshoe-type subfamily has a = 1/2; members with a > 1/2 are
/// permitted so their failure mode can be demonstrated.
struct PriorKernel {
  double a = 0.5;
  std::function<double(double)> L;
  /// log L(t); optional, avoids underflow in log-space evaluations.
  std::function<double(double)> log_L;
  std::string name;
  std::vector<double> family_params;
  /// Draws l2 from pi1 when available; empty for kernels without a
  /// direct sampler. Used by the importance-sampling oracle only.
  std::function<double(RngStream&)> lambda2_sampler;

  bool has_sampler() const { return static_cast<bool>(lambda2_sampler); }
  double eval_log_L(double t) const;
};

struct KernelValidationReport {
  double sup_L_on_grid = 0.0;
  double min_L_tail_on_grid = 0.0;
  double declared_M = 0.0;
  double declared_c0 = 0.0;
  double declared_t0 = 0.0;
  bool passed = false;
};

/// L(t) for t > 0. Throws std::domain_error for t <= 0.
double eval_L(const PriorKernel& kernel, double t);

/// Three-parameter beta-normal kernel: a = alpha, L(t) = (t/(1+t))^(alpha+beta).
/// (0.5, 0.5) is the horseshoe, (0.5, 1) the Strawderman-Berger prior.
/// Requires alpha, beta > 0 and alpha >= 1/2 (the regime of study).
PriorKernel tpbn_kernel(double alpha, double beta);

PriorKernel horseshoe_kernel();
PriorKernel strawderman_berger_kernel();

/// Inverse-gamma kernel: a = shape, L(t) = exp(-1/t).
PriorKernel inv_gamma_kernel(double shape);

/// Grid certificate for the boundedness (sup L <= M) and tail floor
/// (L >= c0 for t >= t0) assumptions. Grid must be non-empty and sorted
/// ascending; throws std::invalid_argument otherwise.
KernelValidationReport validate_kernel(const PriorKernel& kernel,
                                       const std::vector<double>& grid, double M,
                                       double c0, double t0);

/// 400 log-spaced points on [1e-8, 1e8], the default certificate grid.
std::vector<double> default_validation_grid();

/// Kernel lookup by CLI name: "horseshoe", "strawderman-berger",
/// "tpbn:ALPHA:BETA", "inv-gamma:A". Throws std::invalid_argument on an
/// unknown name and std::domain_error on out-of-range parameters.
PriorKernel parse_kernel(const std::string& name);

}  // namespace glshrink
