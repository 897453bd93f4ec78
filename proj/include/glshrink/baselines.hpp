#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "glshrink/decision_rules.hpp"

namespace glshrink {

/// Convolution of the standard normal with the quasi-Cauchy slab:
///   f(x) = (1/sqrt(2 pi)) x^-2 (1 - exp(-x^2/2)),
/// continuous at 0 with value 1/(2 sqrt(2 pi)).
double quasi_cauchy_density(double x);

/// Posterior null probabilities under the two-groups model with
/// quasi-Cauchy slab and non-null proportion p:
///   ell_i = (1-p) phi(x_i) / ((1-p) phi(x_i) + p f(x_i)).
std::vector<double> ell_values(std::span<const double> data, double p);

/// Marginal maximum likelihood estimate of the non-null proportion over
/// [1/n, 1]. The per-observation log likelihood is log-affine in p, so
/// the objective is concave; golden-section search to 1e-8 in p.
/// Requires n >= 2.
double mmle_p(std::span<const double> data);

/// Rule psi_i = 1{ell_i < t} with p fixed at its MMLE; meta records p_hat.
DecisionVector decide_ell(std::span<const double> data, double t);

/// Benjamini-Hochberg step-up on two-sided p-values p_i = 2(1 - Phi(|x_i|)):
/// k = max{i : p_(i) <= i alpha / n}; rejects every hypothesis with
/// p-value <= p_(k).
DecisionVector bh_procedure(std::span<const double> data, double alpha);

/// Hard threshold at the universal level sqrt(2 log(n/q_n)), inclusive.
/// Requires 1 <= q_n < n.
DecisionVector oracle_threshold(std::span<const double> data, std::size_t q_n);

}  // namespace glshrink
