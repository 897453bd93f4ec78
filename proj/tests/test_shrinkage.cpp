#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "glshrink/shrinkage.hpp"
#include "glshrink/shrinkage_table.hpp"

using namespace glshrink;

namespace {

const PriorKernel& hs() {
  static const PriorKernel k = horseshoe_kernel();
  return k;
}

}  // namespace

TEST_CASE("query validation") {
  CHECK_THROWS_AS(ShrinkageQuery(0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(ShrinkageQuery(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(ShrinkageQuery(std::nan(""), 0.1), std::domain_error);
}

TEST_CASE("log posterior density of kappa") {
  // hand evaluation at a = 1/2: 1.5 ln 2 + ln(100/101)
  const double v = log_posterior_kappa_density_unnorm(hs(), ShrinkageQuery(0.0, 0.1), 0.5);
  CHECK(v == doctest::Approx(1.0297704399867498).epsilon(1e-12));

  CHECK_THROWS_AS(log_posterior_kappa_density_unnorm(hs(), ShrinkageQuery(0.0, 0.1), 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(log_posterior_kappa_density_unnorm(hs(), ShrinkageQuery(0.0, 0.1), 1.0),
                  std::domain_error);

  // only the exp((1-kappa) x^2/2) factor depends on x
  const double at0 = log_posterior_kappa_density_unnorm(hs(), ShrinkageQuery(0.0, 0.1), 0.9);
  const double at3 = log_posterior_kappa_density_unnorm(hs(), ShrinkageQuery(3.0, 0.1), 0.9);
  CHECK(at3 - at0 == doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("posterior shrinkage weight: frozen values") {
  // cross-checked against two independent routes (direct lambda-space
  // quadrature and self-normalized importance sampling)
  struct Case {
    double x, tau, want;
  };
  const Case cases[] = {
      {0.0, 0.01, 0.0063072969},  {4.0, 0.001, 0.11108594},
      {4.476, 0.00155, 0.50019164}, {8.0, 0.001, 0.96709411},
      {2.0, 0.1, 0.12592549},     {6.0, 0.1, 0.93856196},
  };
  for (const Case& c : cases) {
    const double got = expected_one_minus_kappa(hs(), ShrinkageQuery(c.x, c.tau));
    CHECK(got == doctest::Approx(c.want).epsilon(1e-6));
  }
}

TEST_CASE("small tau shrinks noise, keeps large signals") {
  const double at0 = expected_one_minus_kappa(hs(), ShrinkageQuery(0.0, 0.01));
  CHECK(at0 > 0.0);
  CHECK(at0 < 0.05);
  CHECK(expected_one_minus_kappa(hs(), ShrinkageQuery(10.0, 0.01)) > 0.9);
  CHECK(expected_kappa(hs(), ShrinkageQuery(0.0, 0.01)) > 0.95);
  CHECK(expected_kappa(hs(), ShrinkageQuery(10.0, 0.01)) < 0.1);
}

TEST_CASE("symmetry and complement identity") {
  for (double x : {0.7, 3.3, 11.0}) {
    const double plus = expected_one_minus_kappa(hs(), ShrinkageQuery(x, 0.05));
    const double minus = expected_one_minus_kappa(hs(), ShrinkageQuery(-x, 0.05));
    CHECK(plus == minus);  // depends on x only through x^2
    const double ek = expected_kappa(hs(), ShrinkageQuery(x, 0.05));
    CHECK(std::abs(plus + ek - 1.0) <= 1e-12);
  }
}

TEST_CASE("range and overflow freedom up to x = 40") {
  for (double x : {0.0, 1.0, 8.0, 20.0, 38.0, 40.0}) {
    for (double tau : {0.5, 0.1, 0.001, 1e-4}) {
      const double v = expected_one_minus_kappa(hs(), ShrinkageQuery(x, tau));
      CHECK(std::isfinite(v));
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
  }
}

TEST_CASE("monotone in tau and in |x|") {
  const double taus[] = {1e-4, 1e-3, 1e-2, 0.1, 0.3, 0.5};
  for (double x : {0.0, 1.5, 4.0, 7.0}) {
    double prev = -1.0;
    for (double tau : taus) {
      const double v = expected_one_minus_kappa(hs(), ShrinkageQuery(x, tau));
      CHECK(v >= prev - 1e-9);
      prev = v;
    }
  }
  for (double tau : {0.1, 0.01}) {
    double prev = -1.0;
    for (double x = 0.0; x <= 10.0; x += 0.5) {
      const double v = expected_one_minus_kappa(hs(), ShrinkageQuery(x, tau));
      CHECK(v >= prev - 1e-9);
      prev = v;
    }
  }
}

TEST_CASE("importance-sampling oracle agrees with quadrature") {
  const PriorKernel kernels[] = {horseshoe_kernel(), strawderman_berger_kernel(),
                                 inv_gamma_kernel(0.5)};
  for (const PriorKernel& k : kernels) {
    for (double x : {0.0, 2.0, 6.0}) {
      for (double tau : {0.1, 0.01}) {
        const ShrinkageQuery q(x, tau);
        const OracleEstimate oe = importance_oracle(k, q, 1000000, 20240817);
        const double quad = expected_one_minus_kappa(k, q);
        CHECK(std::abs(quad - oe.estimate) <=
              std::max(1e-3, 3.0 * oe.std_error));
      }
    }
  }
}

TEST_CASE("oracle contract") {
  const ShrinkageQuery q(1.0, 0.1);
  const OracleEstimate a = importance_oracle(hs(), q, 20000, 7);
  const OracleEstimate b = importance_oracle(hs(), q, 20000, 7);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);

  CHECK_THROWS_AS(importance_oracle(hs(), q, 1000, 7), std::invalid_argument);

  PriorKernel plain;
  plain.a = 0.5;
  plain.L = [](double t) { return t / (1.0 + t); };
  plain.name = "no-sampler";
  CHECK_THROWS_AS(importance_oracle(plain, q, 20000, 7), std::invalid_argument);
}

TEST_CASE("type-one bound rate") {
  CHECK(type1_bound_rate(hs(), 0.01) ==
        doctest::Approx(0.0032947216727440298).epsilon(1e-12));
  CHECK(type1_bound_rate(hs(), 0.1) > type1_bound_rate(hs(), 0.01));
  CHECK(type1_bound_rate(hs(), 0.01) > type1_bound_rate(hs(), 0.001));
  CHECK_THROWS_AS(type1_bound_rate(hs(), 0.5), std::domain_error);
}

TEST_CASE("large-a upper rate (log scale)") {
  const PriorKernel k075 = tpbn_kernel(0.75, 0.5);
  CHECK(large_a_upper_rate(k075, 0.0, 0.1) ==
        doctest::Approx(-3.4538776394910684).epsilon(1e-12));
  const PriorKernel k1 = tpbn_kernel(1.0, 1.0);
  CHECK(large_a_upper_rate(k1, 0.0, 0.1) ==
        doctest::Approx(-3.771137740740135).epsilon(1e-12));
  CHECK_THROWS_AS(large_a_upper_rate(hs(), 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(large_a_upper_rate(k1, 0.0, 0.5), std::domain_error);
}

TEST_CASE("quadrature budget exhaustion carries partials") {
  QuadratureConfig tight;
  tight.max_subdivisions = 1;
  tight.rel_tol = 1e-14;
  tight.abs_tol = 1e-300;
  try {
    shrinkage_integrals(hs(), ShrinkageQuery(2.0, 0.1), tight);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.partial_first));
    CHECK(std::isfinite(e.partial_second));
    CHECK(e.partial_second > 0.0);
  }
}

TEST_CASE("tabulated functionals match direct quadrature") {
  for (double tau : {0.00155, 0.05}) {
    const ShrinkageTable table(hs(), tau, 12.0);
    double max_err_e = 0.0, max_err_m = 0.0;
    for (double x = 0.0171; x < 11.9; x += 0.2381) {
      const ShrinkageIntegrals si = shrinkage_integrals(hs(), ShrinkageQuery(x, tau));
      max_err_e = std::max(max_err_e, std::abs(table.e_one_minus_kappa(x) - si.num / si.den));
      max_err_m = std::max(max_err_m, std::abs(table.log_marginal_rel(x) - std::log(si.den)));
    }
    CHECK(max_err_e < 1e-6);
    CHECK(max_err_m < 1e-6);
    // beyond the tabulated range falls back to quadrature
    const double far = 14.5;
    CHECK(table.e_one_minus_kappa(far) ==
          expected_one_minus_kappa(hs(), ShrinkageQuery(far, tau)));
  }
}
