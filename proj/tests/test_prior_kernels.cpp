#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "glshrink/prior_kernel.hpp"

using namespace glshrink;

TEST_CASE("horseshoe L") {
  const PriorKernel hs = horseshoe_kernel();
  CHECK(hs.a == 0.5);
  CHECK(eval_L(hs, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  // approaches 1 along the tail
  CHECK(eval_L(hs, 1e3) >= 0.999);
  CHECK(eval_L(hs, 1e6) >= 0.999);
  CHECK_THROWS_AS(eval_L(hs, 0.0), std::domain_error);
  CHECK_THROWS_AS(eval_L(hs, -1.0), std::domain_error);
}

TEST_CASE("inverse-gamma L") {
  const PriorKernel ig = inv_gamma_kernel(0.5);
  CHECK(ig.a == 0.5);
  CHECK(eval_L(ig, 1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
  CHECK_THROWS_AS(inv_gamma_kernel(0.0), std::domain_error);
  CHECK_THROWS_AS(inv_gamma_kernel(0.4), std::domain_error);
}

TEST_CASE("eval_L is pure") {
  const PriorKernel hs = horseshoe_kernel();
  for (double t : {0.037, 1.0, 523.7}) CHECK(eval_L(hs, t) == eval_L(hs, t));
}

TEST_CASE("tpbn mapping") {
  const PriorKernel k55 = tpbn_kernel(0.5, 0.5);
  CHECK(k55.a == 0.5);
  CHECK(eval_L(k55, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

  const PriorKernel sb = tpbn_kernel(0.5, 1.0);
  CHECK(eval_L(sb, 1.0) == doctest::Approx(0.3535533905932738).epsilon(1e-14));

  const PriorKernel k11 = tpbn_kernel(1.0, 1.0);
  CHECK(k11.a == 1.0);

  CHECK_THROWS_AS(tpbn_kernel(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(tpbn_kernel(0.5, -1.0), std::domain_error);
  CHECK_THROWS_AS(tpbn_kernel(0.3, 0.5), std::domain_error);
}

TEST_CASE("tpbn(1/2,1/2) equals t/(1+t) on a log grid") {
  const PriorKernel k = tpbn_kernel(0.5, 0.5);
  for (int i = 0; i <= 120; ++i) {
    const double t = std::pow(10.0, -6.0 + 12.0 * i / 120.0);
    const double want = t / (1.0 + t);
    CHECK(std::abs(eval_L(k, t) - want) <= 1e-15 * std::max(1.0, want));
  }
}

TEST_CASE("validate_kernel") {
  const PriorKernel hs = horseshoe_kernel();
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(std::pow(10.0, -2.0 + 8.0 * i / 200.0));

  const KernelValidationReport pass = validate_kernel(hs, grid, 1.0, 0.5, 1.0);
  CHECK(pass.passed);
  CHECK(pass.sup_L_on_grid <= 1.0);
  CHECK(pass.min_L_tail_on_grid >= 0.5);

  const KernelValidationReport fail = validate_kernel(hs, grid, 0.3, 0.5, 1.0);
  CHECK_FALSE(fail.passed);

  CHECK_THROWS_AS(validate_kernel(hs, {}, 1.0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(validate_kernel(hs, {2.0, 1.0}, 1.0, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("shipped kernels satisfy the boundedness and tail-floor assumptions") {
  const auto grid = default_validation_grid();
  CHECK(validate_kernel(horseshoe_kernel(), grid, 1.0, 0.5, 1.0).passed);
  CHECK(validate_kernel(strawderman_berger_kernel(), grid, 1.0, 0.35, 1.0).passed);
  CHECK(validate_kernel(tpbn_kernel(1.0, 1.0), grid, 1.0, 0.25, 1.0).passed);
  CHECK(validate_kernel(inv_gamma_kernel(0.5), grid, 1.0, 0.36, 1.0).passed);
}

TEST_CASE("parse_kernel") {
  CHECK(parse_kernel("horseshoe").name == "horseshoe");
  CHECK(parse_kernel("strawderman-berger").a == 0.5);
  const PriorKernel k = parse_kernel("tpbn:1:1");
  CHECK(k.a == 1.0);
  CHECK(parse_kernel("inv-gamma:0.5").a == 0.5);
  CHECK_THROWS_AS(parse_kernel("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS(parse_kernel("tpbn:0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_kernel("inv-gamma:0.1"), std::domain_error);
}
