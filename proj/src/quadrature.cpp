#include "glshrink/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace glshrink {

namespace {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK constants), positive
// half of the symmetric rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b;
  double v0, v1;    // Kronrod estimates of both components
  double e0, e1;    // |Kronrod - Gauss| error estimates
  double badness;   // max of the two errors, drives subdivision order
};

Interval evaluate(const PairIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double k0 = 0.0, k1 = 0.0, g0 = 0.0, g1 = 0.0;
  for (int j = 0; j < 8; ++j) {
    const double dx = h * kXgk[j];
    std::array<double, 2> lo{0.0, 0.0}, hi{0.0, 0.0};
    if (j < 7) {
      lo = f(c - dx);
      hi = f(c + dx);
    } else {
      lo = f(c);  // center node counted once
    }
    const double s0 = lo[0] + hi[0];
    const double s1 = lo[1] + hi[1];
    k0 += kWgk[j] * s0;
    k1 += kWgk[j] * s1;
    if (j % 2 == 1) {  // odd Kronrod nodes and the center form the Gauss-7 rule
      g0 += kWg[j / 2] * s0;
      g1 += kWg[j / 2] * s1;
    }
  }
  Interval iv;
  iv.a = a;
  iv.b = b;
  iv.v0 = k0 * h;
  iv.v1 = k1 * h;
  iv.e0 = std::abs((k0 - g0) * h);
  iv.e1 = std::abs((k1 - g1) * h);
  iv.badness = std::max(iv.e0, iv.e1);
  return iv;
}

}  // namespace

PairIntegral integrate_pair(const PairIntegrand& f, double a, double b,
                            const QuadratureConfig& config) {
  PairIntegral out;
  if (a == b) return out;

  std::vector<Interval> pool;
  pool.reserve(64);
  pool.push_back(evaluate(f, a, b));

  const auto worse = [](const Interval& x, const Interval& y) {
    return x.badness < y.badness;
  };
  std::make_heap(pool.begin(), pool.end(), worse);

  auto totals = [&pool](PairIntegral& t) {
    t.first = t.second = t.err_first = t.err_second = 0.0;
    for (const Interval& iv : pool) {
      t.first += iv.v0;
      t.second += iv.v1;
      t.err_first += iv.e0;
      t.err_second += iv.e1;
    }
    t.intervals = static_cast<int>(pool.size());
  };

  for (;;) {
    totals(out);
    const double tol0 = std::max(config.abs_tol, config.rel_tol * std::abs(out.first));
    const double tol1 = std::max(config.abs_tol, config.rel_tol * std::abs(out.second));
    if (out.err_first <= tol0 && out.err_second <= tol1) return out;
    if (static_cast<int>(pool.size()) >= config.max_subdivisions)
      throw QuadratureError("integrate_pair: subdivision budget exhausted", out.first,
                            out.second);
    std::pop_heap(pool.begin(), pool.end(), worse);
    const Interval top = pool.back();
    pool.pop_back();
    const double mid = 0.5 * (top.a + top.b);
    pool.push_back(evaluate(f, top.a, mid));
    std::push_heap(pool.begin(), pool.end(), worse);
    pool.push_back(evaluate(f, mid, top.b));
    std::push_heap(pool.begin(), pool.end(), worse);
  }
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& config) {
  const PairIntegrand pf = [&f](double x) { return std::array<double, 2>{f(x), 0.0}; };
  return integrate_pair(pf, a, b, config).first;
}

}  // namespace glshrink
