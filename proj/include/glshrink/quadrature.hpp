#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

namespace glshrink {

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 400;
};

/// Thrown when adaptive subdivision exhausts its budget before reaching
/// the requested tolerance. Carries the partial values of both integrals
/// so callers can inspect how far the computation got.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double partial_first, double partial_second)
      : std::runtime_error(what),
        partial_first(partial_first),
        partial_second(partial_second) {}
  double partial_first;
  double partial_second;
};

/// Integrand evaluated as a pair so that two integrals sharing the same
/// nodes can be computed in one pass.
using PairIntegrand = std::function<std::array<double, 2>(double)>;

struct PairIntegral {
  double first = 0.0;
  double second = 0.0;
  double err_first = 0.0;
  double err_second = 0.0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod 7/15 over [a, b]. Subdivides the
/// interval with the largest error estimate until both components meet
/// max(abs_tol, rel_tol * |estimate|).
PairIntegral integrate_pair(const PairIntegrand& f, double a, double b,
                            const QuadratureConfig& config);

/// Scalar convenience wrapper.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& config);

}  // namespace glshrink
