#include "glshrink/shrinkage.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "glshrink/stats.hpp"

namespace glshrink {

ShrinkageQuery::ShrinkageQuery(double x, double tau) : x(x), tau(tau) {
  if (!std::isfinite(x)) throw std::domain_error("ShrinkageQuery: x must be finite");
  if (!(tau > 0.0 && tau < 1.0))
    throw std::domain_error("ShrinkageQuery: tau must lie in (0,1)");
}

double log_posterior_kappa_density_unnorm(const PriorKernel& kernel,
                                          const ShrinkageQuery& query, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::domain_error("log_posterior_kappa_density_unnorm: kappa must lie in (0,1)");
  const double a = kernel.a;
  const double arg = (1.0 / (query.tau * query.tau)) * (1.0 / kappa - 1.0);
  return (a - 0.5) * std::log(kappa) - (a + 1.0) * std::log1p(-kappa) +
         kernel.eval_log_L(arg) + (1.0 - kappa) * query.x * query.x * 0.5;
}

namespace {

// The t-substitution integrand pair (den, num = w * den), with the
// common factor exp(x^2/2) removed: the exponent is (x^2/2)(w(t) - 1)
// = -(x^2/2)/(1 + t tau^2) <= 0, so every node value stays bounded for
// any finite x.
struct IntegrandContext {
  const PriorKernel* kernel;
  double a;
  double t2;  // tau^2
  double c;   // x^2/2
};

inline std::array<double, 2> base_at(const IntegrandContext& ctx, double t,
                                     double power_term) {
  const double s = 1.0 + t * ctx.t2;
  const double lt = ctx.kernel->L(t);
  if (!(lt > 0.0)) return {0.0, 0.0};
  const double g = power_term * lt * std::exp(-ctx.c / s) / std::sqrt(s);
  const double w = t * ctx.t2 / s;
  return {g, w * g};
}

// t in (0, 1], t = u^2. The combined power u^(-2a-1) is computed with a
// log-space fallback when the plain product would overflow.
inline std::array<double, 2> seg_head(const IntegrandContext& ctx, double u) {
  const double t = u * u;
  const double lt = ctx.kernel->L(t);
  if (!(lt > 0.0)) return {0.0, 0.0};
  double prod = std::pow(u, -2.0 * ctx.a - 1.0) * lt;
  if (!std::isfinite(prod))
    prod = std::exp(ctx.kernel->eval_log_L(t) - (2.0 * ctx.a + 1.0) * std::log(u));
  const double s = 1.0 + t * ctx.t2;
  const double g = 2.0 * prod * std::exp(-ctx.c / s) / std::sqrt(s);
  const double w = t * ctx.t2 / s;
  return {g, w * g};
}

// t in [exp(lo), exp(hi)], t = exp(s): compresses the polynomial decay
// over many decades into a gentle integrand.
inline std::array<double, 2> seg_log(const IntegrandContext& ctx, double s) {
  const double t = std::exp(s);
  return base_at(ctx, t, std::exp(-ctx.a * s));
}

// t in [1/tau^4, inf), u = 1/t: (1 + tau^2/u)^(-1/2)/u^2 folds to
// u^(a-1/2) / sqrt(u + tau^2).
inline std::array<double, 2> seg_tail(const IntegrandContext& ctx, double u) {
  const double lt = ctx.kernel->L(1.0 / u);
  if (!(lt > 0.0)) return {0.0, 0.0};
  const double sp = u + ctx.t2;
  const double w = ctx.t2 / sp;
  const double g =
      std::pow(u, ctx.a - 0.5) * lt * std::exp(-ctx.c * u / sp) / std::sqrt(sp);
  return {g, w * g};
}

}  // namespace

ShrinkageIntegrals shrinkage_integrals(const PriorKernel& kernel,
                                       const ShrinkageQuery& query,
                                       const QuadratureConfig& config) {
  const IntegrandContext ctx{&kernel, kernel.a, query.tau * query.tau,
                             0.5 * query.x * query.x};
  const double log_inv_tau = std::log(1.0 / query.tau);
  const double tau4 = ctx.t2 * ctx.t2;

  struct Segment {
    PairIntegrand f;
    double lo, hi;
  };
  const Segment segments[4] = {
      {[&ctx](double u) { return seg_head(ctx, u); }, 0.0, 1.0},
      {[&ctx](double s) { return seg_log(ctx, s); }, 0.0, 2.0 * log_inv_tau},
      {[&ctx](double s) { return seg_log(ctx, s); }, 2.0 * log_inv_tau, 4.0 * log_inv_tau},
      {[&ctx](double u) { return seg_tail(ctx, u); }, 0.0, tau4}};

  double num = 0.0, den = 0.0;
  for (const Segment& seg : segments) {
    try {
      const PairIntegral r = integrate_pair(seg.f, seg.lo, seg.hi, config);
      den += r.first;
      num += r.second;
    } catch (const QuadratureError& e) {
      // carries (partial numerator, partial denominator)
      throw QuadratureError(std::string("shrinkage_integrals: ") + e.what(),
                            num + e.partial_second, den + e.partial_first);
    }
  }
  return {num, den};
}

double expected_one_minus_kappa(const PriorKernel& kernel, const ShrinkageQuery& query,
                                const QuadratureConfig& config) {
  const ShrinkageIntegrals si = shrinkage_integrals(kernel, query, config);
  return si.num / si.den;
}

double expected_kappa(const PriorKernel& kernel, const ShrinkageQuery& query,
                      const QuadratureConfig& config) {
  return 1.0 - expected_one_minus_kappa(kernel, query, config);
}

double log_marginal_rel(const PriorKernel& kernel, const ShrinkageQuery& query,
                        const QuadratureConfig& config) {
  return std::log(shrinkage_integrals(kernel, query, config).den);
}

OracleEstimate importance_oracle(const PriorKernel& kernel, const ShrinkageQuery& query,
                                 std::int64_t n_draws, std::uint64_t seed) {
  if (!kernel.has_sampler())
    throw std::invalid_argument("importance_oracle: kernel '" + kernel.name +
                                "' has no direct sampler");
  if (n_draws < 10000)
    throw std::invalid_argument("importance_oracle: n_draws must be >= 10^4");

  const double t2 = query.tau * query.tau;
  const double c = 0.5 * query.x * query.x;

  // log weight of draw i; counter-based stream keyed by (seed, i) so the
  // same draw can be regenerated in each pass.
  const auto draw = [&](std::int64_t i, double& log_w, double& one_minus_kappa) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    const double l2 = kernel.lambda2_sampler(rng);
    const double s2 = 1.0 + t2 * l2;
    log_w = -c / s2 - 0.5 * std::log(s2);
    one_minus_kappa = t2 * l2 / s2;
  };

  // For large x the raw weights underflow; shift by the max log weight.
  double shift = 0.0;
  if (c > 600.0) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < n_draws; ++i) {
      double lw, o;
      draw(i, lw, o);
      if (lw > m) m = lw;
    }
    shift = m;
  }

  double sum_w = 0.0, comp_w = 0.0;
  double sum_wo = 0.0, comp_wo = 0.0;
  const auto kahan_add = [](double& sum, double& comp, double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (std::int64_t i = 0; i < n_draws; ++i) {
    double lw, o;
    draw(i, lw, o);
    const double w = std::exp(lw - shift);
    kahan_add(sum_w, comp_w, w);
    kahan_add(sum_wo, comp_wo, w * o);
  }
  const double estimate = sum_wo / sum_w;

  // Delete-one jackknife: R_(i) - R = w_i (R - o_i) / (den - w_i).
  double s1 = 0.0, c1 = 0.0, s2sum = 0.0, c2 = 0.0;
  for (std::int64_t i = 0; i < n_draws; ++i) {
    double lw, o;
    draw(i, lw, o);
    const double w = std::exp(lw - shift);
    const double d = w * (estimate - o) / (sum_w - w);
    kahan_add(s1, c1, d);
    kahan_add(s2sum, c2, d * d);
  }
  const double n = static_cast<double>(n_draws);
  const double var_jack = (n - 1.0) / n * (s2sum - s1 * s1 / n);
  OracleEstimate out;
  out.estimate = estimate;
  out.std_error = std::sqrt(std::max(var_jack, 0.0));
  out.n_draws = n_draws;
  return out;
}

double type1_bound_rate(const PriorKernel& kernel, double tau) {
  if (!(tau > 0.0 && tau < std::exp(-1.0)))
    throw std::domain_error("type1_bound_rate: tau must lie in (0, 1/e)");
  const double inv_t2 = 1.0 / (tau * tau);
  return tau * kernel.L(inv_t2) / std::sqrt(std::log(inv_t2));
}

double large_a_upper_rate(const PriorKernel& kernel, double x, double tau) {
  if (!(kernel.a > 0.5))
    throw std::invalid_argument("large_a_upper_rate: requires a > 1/2");
  if (!(tau > 0.0 && tau < std::exp(-1.0)))
    throw std::domain_error("large_a_upper_rate: tau must lie in (0, 1/e)");
  const double base = 0.5 * x * x;
  if (kernel.a < 1.0) return base + 2.0 * kernel.a * std::log(tau);
  return base + 2.0 * std::log(tau) + std::log(std::log(1.0 / tau));
}

}  // namespace glshrink
