#include <cmath>
#include <vector>

#include "bridgeirt/polya_gamma.hpp"
#include "bridgeirt/rng.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using bridgeirt::Rng;
using bridgeirt::draw_pg1;
using namespace testsupport;

TEST_CASE("PG(1,c) sample means hit tanh(c/2)/(2c) at several tilts") {
  Rng rng(21, 0);
  for (const double c : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const int n = 30000;
    std::vector<double> v(n);
    for (double& x : v) {
      x = draw_pg1(c, rng);
      REQUIRE(x > 0.0);
    }
    const double m = mean_of(v);
    const double se = std::sqrt(var_of(v) / n);
    INFO("c = ", c, " mean ", m, " expected ", pg_mean(c));
    CHECK(std::abs(m - pg_mean(c)) < 4.0 * se);
  }
}

TEST_CASE("PG(1,c) distribution matches the truncated sum-of-gammas oracle") {
  for (const double c : {0.0, 1.0, 3.0}) {
    Rng rng(22, 0);
    Rng orng(23, 0);
    const int n = 4000;
    std::vector<double> sampler(n), oracle(n);
    for (int i = 0; i < n; ++i) {
      sampler[i] = draw_pg1(c, rng);
      oracle[i] = pg_oracle_draw(c, orng);
    }
    const double p = ks2_pvalue(sampler, oracle);
    INFO("c = ", c, " two-sample KS p = ", p);
    CHECK(p > 1e-3);
  }
}

TEST_CASE("PG(1,c) is symmetric in the sign of c") {
  Rng a(24, 0), b(24, 0);
  // Identical streams, mirrored tilts: identical draws.
  for (int i = 0; i < 2000; ++i) CHECK(draw_pg1(1.7, a) == draw_pg1(-1.7, b));
}

TEST_CASE("PG(1,c) stays finite and positive at extreme tilts") {
  Rng rng(25, 0);
  for (const double c : {50.0, 200.0, 1000.0}) {
    for (int i = 0; i < 200; ++i) {
      const double x = draw_pg1(c, rng);
      REQUIRE(std::isfinite(x));
      REQUIRE(x > 0.0);
    }
    // Mean shrinks like 1/(2c) for large c.
    std::vector<double> v(4000);
    for (double& x : v) x = draw_pg1(c, rng);
    CHECK(mean_of(v) == doctest::Approx(pg_mean(c)).epsilon(0.05));
  }
}
