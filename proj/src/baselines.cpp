#include "glshrink/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "glshrink/stats.hpp"

namespace glshrink {

double quasi_cauchy_density(double x) {
  if (!std::isfinite(x)) throw std::domain_error("quasi_cauchy_density: x must be finite");
  const double u = 0.5 * x * x;
  if (u == 0.0) return 0.5 / kSqrt2Pi;
  return -std::expm1(-u) / (2.0 * u * kSqrt2Pi);
}

namespace {

// log(f(x) / phi(x)) = log((exp(u) - 1) / (2u)), u = x^2/2, computed so
// that neither factor overflows for large |x|.
double log_slab_to_null_ratio(double x) {
  const double u = 0.5 * x * x;
  if (u == 0.0) return -std::log(2.0);
  if (u > 36.0) return u + std::log1p(-std::exp(-u)) - std::log(2.0 * u);
  return std::log(std::expm1(u) / (2.0 * u));
}

}  // namespace

std::vector<double> ell_values(std::span<const double> data, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("ell_values: p must lie in [0,1]");
  std::vector<double> out(data.size());
  if (p == 0.0) {
    std::fill(out.begin(), out.end(), 1.0);
    return out;
  }
  if (p == 1.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  const double log_odds = std::log(p) - std::log1p(-p);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double z = log_odds + log_slab_to_null_ratio(data[i]);
    out[i] = 1.0 / (1.0 + std::exp(z));
  }
  return out;
}

double mmle_p(std::span<const double> data) {
  const std::size_t n = data.size();
  if (n < 2) throw std::invalid_argument("mmle_p: need n >= 2");

  // Cache the two mixture component densities once.
  std::vector<double> phi(n), slab(n);
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = normal_pdf(data[i]);
    slab[i] = quasi_cauchy_density(data[i]);
  }
  const auto loglik = [&](double p) {
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      ll += std::log((1.0 - p) * phi[i] + p * slab[i]);
    return ll;
  };

  constexpr double kGolden = 0.6180339887498949;  // (sqrt(5)-1)/2
  double lo = 1.0 / static_cast<double>(n), hi = 1.0;
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = loglik(x1), f2 = loglik(x2);
  while (hi - lo > 1e-8) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = loglik(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = loglik(x1);
    }
  }
  const double mid = 0.5 * (lo + hi);
  // The maximizer can sit at either boundary; the interior estimate only
  // wins if it actually beats them.
  const double p_lo = 1.0 / static_cast<double>(n);
  double best = mid, best_ll = loglik(mid);
  if (loglik(p_lo) >= best_ll) {
    best = p_lo;
    best_ll = loglik(p_lo);
  }
  if (loglik(1.0) > best_ll) best = 1.0;
  return best;
}

DecisionVector decide_ell(std::span<const double> data, double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("decide_ell: t must lie in (0,1)");
  const double p_hat = mmle_p(data);
  const std::vector<double> ell = ell_values(data, p_hat);
  DecisionVector out;
  out.psi.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out.psi[i] = ell[i] < t ? 1 : 0;
  out.meta.p_hat = p_hat;
  return out;
}

DecisionVector bh_procedure(std::span<const double> data, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("bh_procedure: alpha must lie in (0,1)");
  const std::size_t n = data.size();
  DecisionVector out;
  out.psi.assign(n, 0);
  if (n == 0) return out;

  std::vector<double> pvals(n);
  for (std::size_t i = 0; i < n; ++i) pvals[i] = two_sided_pvalue(data[i]);
  std::vector<double> sorted = pvals;
  std::sort(sorted.begin(), sorted.end());

  double cutoff = -1.0;
  for (std::size_t i = n; i-- > 0;) {
    if (sorted[i] <= (static_cast<double>(i + 1) * alpha) / static_cast<double>(n)) {
      cutoff = sorted[i];
      break;
    }
  }
  if (cutoff < 0.0) return out;
  for (std::size_t i = 0; i < n; ++i) out.psi[i] = pvals[i] <= cutoff ? 1 : 0;
  return out;
}

DecisionVector oracle_threshold(std::span<const double> data, std::size_t q_n) {
  const std::size_t n = data.size();
  if (q_n < 1 || q_n >= n)
    throw std::invalid_argument("oracle_threshold: need 1 <= q_n < n");
  const double threshold = universal_threshold(n, q_n);
  DecisionVector out;
  out.psi.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.psi[i] = std::abs(data[i]) >= threshold ? 1 : 0;
  return out;
}

}  // namespace glshrink
