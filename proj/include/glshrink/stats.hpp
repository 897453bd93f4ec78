#pragma once

#include <cmath>
#include <cstddef>

namespace glshrink {

inline constexpr double kSqrt2Pi = 2.5066282746310005024;
inline constexpr double kSqrt2 = 1.4142135623730950488;

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

/// Upper tail P(Z > x), accurate far into the tail.
inline double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

/// Two-sided p-value for a standard normal test statistic.
inline double two_sided_pvalue(double x) { return std::erfc(std::abs(x) / kSqrt2); }

/// sqrt(2 log(n/q)), the detection boundary for hard thresholding.
inline double universal_threshold(std::size_t n, std::size_t q) {
  return std::sqrt(2.0 * std::log(static_cast<double>(n) / static_cast<double>(q)));
}

}  // namespace glshrink
