#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "glshrink/decision_rules.hpp"
#include "glshrink/risk_lab.hpp"

using namespace glshrink;

namespace {

const PriorKernel& hs() {
  static const PriorKernel k = horseshoe_kernel();
  return k;
}

std::vector<double> gaussian_data(std::size_t n, unsigned seed, double shift = 0.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(shift, 1.0);
  std::vector<double> out(n);
  for (double& v : out) v = nd(gen);
  return out;
}

}  // namespace

TEST_CASE("fixed-tau rule basics") {
  const std::vector<double> data = {0.0, 10.0};
  const DecisionVector dv = decide_fixed_tau(data, hs(), 0.01);
  REQUIRE(dv.psi.size() == 2);
  CHECK(dv.psi[0] == 0);
  CHECK(dv.psi[1] == 1);

  CHECK(decide_fixed_tau({}, hs(), 0.01).psi.empty());
  CHECK_THROWS_AS(decide_fixed_tau(data, hs(), 0.0), std::domain_error);
  CHECK_THROWS_AS(decide_fixed_tau(data, hs(), 1.0), std::domain_error);
}

TEST_CASE("a value exactly at the threshold is not rejected") {
  const std::vector<double> data = {2.0};
  const double e = expected_one_minus_kappa(hs(), ShrinkageQuery(2.0, 0.1));
  const DecisionVector dv = decide_fixed_tau(data, hs(), 0.1, e);
  CHECK(dv.psi[0] == 0);  // strict inequality
  const DecisionVector below = decide_fixed_tau(data, hs(), 0.1, e * (1.0 - 1e-9));
  CHECK(below.psi[0] == 1);
}

TEST_CASE("empirical Bayes plug-in scale") {
  // threshold sqrt(2 ln 10) = 2.1460
  std::vector<double> data(10, 0.0);
  CHECK(estimate_tau_eb(data, 2.0, 1.0) == doctest::Approx(0.1).epsilon(1e-15));

  data[3] = 2.5;
  data[7] = -3.0;
  CHECK(estimate_tau_eb(data, 2.0, 1.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(estimate_tau_eb(data, 2.0, 2.0) == doctest::Approx(0.1).epsilon(1e-15));

  // the exceedance is strict
  std::vector<double> edge(10, 0.0);
  edge[0] = std::sqrt(2.0 * std::log(10.0));
  CHECK(estimate_tau_eb(edge, 2.0, 1.0) == doctest::Approx(0.1).epsilon(1e-15));

  CHECK_THROWS_AS(estimate_tau_eb(std::vector<double>{1.0}, 2.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_tau_eb(data, 1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(estimate_tau_eb(data, 2.0, 0.5), std::invalid_argument);
}

TEST_CASE("empirical Bayes rule") {
  std::vector<double> zeros(100, 0.0);
  const DecisionVector all_null = decide_eb(zeros, hs());
  CHECK(*all_null.meta.tau_hat == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(std::accumulate(all_null.psi.begin(), all_null.psi.end(), 0) == 0);

  std::vector<double> one_signal(100, 0.0);
  one_signal[42] = 20.0;
  const DecisionVector dv = decide_eb(one_signal, hs());
  CHECK(dv.psi[42] == 1);

  const DecisionVector again = decide_eb(one_signal, hs());
  CHECK(dv.psi == again.psi);
  CHECK(*dv.meta.tau_hat == *again.meta.tau_hat);
}

TEST_CASE("tau posterior weights") {
  CHECK_THROWS_AS(tau_posterior_weights({}, hs(), {}, 0.01, 0.1, 1),
                  std::invalid_argument);

  // no data: weights reduce to the prior cell masses
  const std::vector<double> w = tau_posterior_weights({}, hs(), {}, 0.01, 0.1, 16);
  REQUIRE(w.size() == 16);
  const std::vector<double> grid = log_spaced_grid(0.01, 0.1, 16);
  std::vector<double> cells(16);
  double total = 0.0;
  for (std::size_t g = 0; g < 16; ++g) {
    const double left = g == 0 ? grid[0] : grid[g - 1];
    const double right = g + 1 == 16 ? grid[15] : grid[g + 1];
    cells[g] = 0.5 * (right - left);
    total += cells[g];
  }
  for (std::size_t g = 0; g < 16; ++g)
    CHECK(w[g] == doctest::Approx(cells[g] / total).epsilon(1e-12));

  // weights always sum to one
  const std::vector<double> data = gaussian_data(40, 11);
  const std::vector<double> w2 = tau_posterior_weights(data, hs(), {}, 0.005, 0.2, 24);
  CHECK(std::accumulate(w2.begin(), w2.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : w2) CHECK(v >= 0.0);
}

TEST_CASE("degenerate one-point mixture reduces to the fixed-tau rule") {
  const std::vector<double> data = gaussian_data(25, 3, 1.0);
  const double tau0 = 0.03;
  const std::vector<double> grid = {tau0};
  const std::vector<double> weights = {1.0};
  const std::vector<double> means = fb_posterior_means(data, hs(), grid, weights);
  const DecisionVector direct = decide_fixed_tau(data, hs(), tau0);
  for (std::size_t i = 0; i < data.size(); ++i)
    CHECK((means[i] > 0.5 ? 1 : 0) == direct.psi[i]);
}

TEST_CASE("full Bayes posterior mean is a convex combination over the grid") {
  const std::vector<double> data = gaussian_data(12, 5, 2.0);
  const std::vector<double> grid = log_spaced_grid(1.0 / 64, 0.2, 16);
  const std::vector<double> w = tau_posterior_weights(data, hs(), {}, 1.0 / 64, 0.2, 16);
  const std::vector<double> means = fb_posterior_means(data, hs(), grid, w);
  for (std::size_t i = 0; i < data.size(); ++i) {
    double lo = 1.0, hi = 0.0;
    for (double tau : grid) {
      const double e = expected_one_minus_kappa(hs(), ShrinkageQuery(data[i], tau));
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    CHECK(means[i] >= lo - 1e-12);
    CHECK(means[i] <= hi + 1e-12);
  }
}

TEST_CASE("full Bayes rule on pure noise rejects nothing") {
  std::vector<double> zeros(100, 0.0);
  DecisionRuleSpec spec;
  FullBayesRule fb;
  fb.alpha_n = std::pow(std::log(100.0), 0.3) / 100.0;
  fb.grid_size = 16;
  spec.variant = fb;
  spec.kernel = hs();
  const DecisionVector dv = decide_fb(zeros, spec);
  CHECK(std::accumulate(dv.psi.begin(), dv.psi.end(), 0) == 0);

  // a prepared rule covers the large-n case cheaply
  const RuleDescriptor d = parse_rule("fb");
  const PreparedRule prepared(d, hs(), 10000, 10);
  const std::vector<double> big(10000, 0.0);
  const DecisionVector big_dv = prepared.decide(big);
  CHECK(std::accumulate(big_dv.psi.begin(), big_dv.psi.end(), 0) == 0);
}

TEST_CASE("full Bayes validation") {
  DecisionRuleSpec spec;
  FullBayesRule fb;
  fb.alpha_n = 0.05;
  fb.grid_size = 8;  // too coarse
  spec.variant = fb;
  spec.kernel = hs();
  const std::vector<double> data = gaussian_data(50, 9);
  CHECK_THROWS_AS(decide_fb(data, spec), std::invalid_argument);
  fb.grid_size = 16;
  fb.alpha_n = 1.0 / 50;  // not > 1/n
  spec.variant = fb;
  CHECK_THROWS_AS(decide_fb(data, spec), std::invalid_argument);
}

TEST_CASE("permutation equivariance and sign invariance") {
  const std::vector<double> data = gaussian_data(30, 17, 1.5);
  std::vector<std::size_t> perm(data.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(99));
  std::vector<double> permuted(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) permuted[i] = data[perm[i]];

  for (const char* token : {"fixed:0.05", "eb"}) {
    const RuleDescriptor d = parse_rule(token);
    const PreparedRule rule(d, hs(), data.size(), 3);
    const DecisionVector base = rule.decide(data);
    const DecisionVector after = rule.decide(permuted);
    for (std::size_t i = 0; i < data.size(); ++i) CHECK(after.psi[i] == base.psi[perm[i]]);

    std::vector<double> flipped = data;
    for (std::size_t i = 0; i < flipped.size(); i += 3) flipped[i] = -flipped[i];
    const DecisionVector neg = rule.decide(flipped);
    CHECK(neg.psi == base.psi);
  }
}

TEST_CASE("monotone rejection region for the fixed-tau rule") {
  const std::vector<double> data = gaussian_data(50, 23, 2.0);
  const DecisionVector dv = decide_fixed_tau(data, hs(), 0.02);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!dv.psi[i]) continue;
    for (std::size_t j = 0; j < data.size(); ++j)
      if (std::abs(data[j]) >= std::abs(data[i])) CHECK(dv.psi[j] == 1);
  }
}
