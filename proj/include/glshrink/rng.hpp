#pragma once

#include <cmath>
#include <cstdint>

namespace glshrink {

namespace detail {

// Stafford variant 13 finalizer; full 64-bit avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

/// Counter-based pseudo-random stream. A stream is fully determined by
/// (seed, index, tag), so draws do not depend on how work is scheduled
/// across threads: every consumer derives its own stream and walks it
/// sequentially.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t index, std::uint64_t tag = 0)
      : state_(detail::mix64(detail::mix64(seed + 0x9e3779b97f4a7c15ULL * (tag + 1)) ^
                             detail::mix64(index + 0xd1b54a32d192ed03ULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state_);
  }

  /// Uniform on the open interval (0,1).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (two uniforms per draw).
  double next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  /// Gamma(shape, rate=1), Marsaglia-Tsang with the shape<1 boost.
  double next_gamma(double shape) {
    if (shape < 1.0) {
      const double u = next_uniform();
      return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = next_normal();
      double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      const double v = t * t * t;
      const double u = next_uniform();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  /// Beta(alpha, beta). Closed-form paths for the shapes the built-in
  /// kernels use; the two-gamma representation otherwise.
  double next_beta(double alpha, double beta) {
    if (alpha == 0.5 && beta == 0.5) {
      // arcsine law
      const double s = std::sin(1.5707963267948966192 * next_uniform());
      return s * s;
    }
    if (beta == 1.0) return std::pow(next_uniform(), 1.0 / alpha);
    if (alpha == 1.0) return 1.0 - std::pow(next_uniform(), 1.0 / beta);
    const double x = next_gamma(alpha);
    const double y = next_gamma(beta);
    return x / (x + y);
  }

 private:
  std::uint64_t state_;
};

/// One standard normal keyed by (seed, i): the counter-based stream used
/// for data generation.
inline double normal_draw(std::uint64_t seed, std::uint64_t i) {
  RngStream s(seed, i);
  return s.next_normal();
}

/// Derives an independent sub-seed, used to give each replicate (and each
/// purpose within a replicate) its own stream family.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index,
                                 std::uint64_t tag = 0) {
  return detail::mix64(detail::mix64(seed ^ 0x5851f42d4c957f2dULL) +
                       detail::mix64(index * 2 + tag));
}

}  // namespace glshrink
