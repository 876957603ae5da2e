#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>

#include "eztree/equilibrium.hpp"
#include "eztree/euler.hpp"
#include "eztree/model.hpp"
#include "eztree/rng.hpp"
#include "support/economy_stream.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using eztree::Economy;
using eztree::EstimateOptions;
using eztree::euler_expectation_equity;
using eztree::euler_expectation_riskfree;
using eztree::euler_residual_equity;
using eztree::euler_residual_riskfree;
using eztree::lognormal_mean;
using eztree::McEstimate;
using eztree::model_error;
using eztree::sdf;
using eztree::validate;

namespace {

Economy baseline() { return validate({0.02, 10.0, 1.5}, {0.018, 0.036}); }

}  // namespace

TEST_CASE("lognormal moment identity") {
  REQUIRE(lognormal_mean(1.0, 0.0, 0.0) == 1.0);
  REQUIRE_THAT(lognormal_mean(-10.0, 0.018, 0.001296),
               WithinRel(0.8911878885041844, 1e-15));
  REQUIRE_THROWS_AS(lognormal_mean(1.0, 0.0, -1e-9), model_error);

  // Against a direct Monte Carlo average of e^{a ln y}.
  const double a = -2.5;
  const std::size_t n = 1u << 17;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::exp(a * (0.018 + 0.036 * eztree::normal_at(3, i)));
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq - n * mean * mean) / (n - 1.0) / n);
  REQUIRE_THAT(lognormal_mean(a, 0.018, 0.036 * 0.036), WithinAbs(mean, 3.0 * se));
}

TEST_CASE("pricing kernel matches the high-precision reference on a z-grid") {
  const Economy econ = baseline();
  const double c = eztree::pd_ratio(econ);
  const struct {
    double z, m;
  } table[] = {
      {-6.0, 7.953149390753915},
      {-4.0, 3.871213407936142},
      {-2.0, 1.8843218596154072},
      {-1.0, 1.3146467521518104},
      {0.0, 0.9171979161224885},
      {0.5, 0.7661080973056091},
      {1.0, 0.6399072724003435},
      {2.0, 0.4464481548344061},
      {4.0, 0.2173096465348139},
      {6.0, 0.1057759606926847},
  };
  for (const auto& row : table) {
    const double y = std::exp(0.018 + 0.036 * row.z);
    const auto real = sdf(y, econ, c);
    REQUIRE_THAT(real.m, WithinRel(row.m, 1e-12));
    REQUIRE_THAT(real.r, WithinRel((1.0 + c) / c * y, 1e-15));
    REQUIRE(real.m > 0.0);
  }
}

TEST_CASE("pricing kernel special cases collapse as the exponents predict") {
  // gamma = 1 (theta = 0): m = 1/r regardless of beta and psi.
  const Economy log_util = validate({0.02, 1.0, 1.5}, {0.018, 0.036});
  const double c_log = eztree::pd_ratio(log_util);
  for (double y : {0.8, 1.0, 1.25}) {
    const auto real = sdf(y, log_util, c_log);
    REQUIRE_THAT(real.m, WithinRel(1.0 / real.r, 1e-14));
  }
  // gamma = 1/psi (theta = 1): m = beta y^{-gamma}, the CRRA kernel.
  const Economy crra = validate({0.02, 2.0, 0.5}, {0.018, 0.036});
  const double c_crra = eztree::pd_ratio(crra);
  for (double y : {0.8, 1.0, 1.25}) {
    const auto real = sdf(y, crra, c_crra);
    REQUIRE_THAT(real.m, WithinRel(std::exp(-0.02) * std::pow(y, -2.0), 1e-14));
  }
}

TEST_CASE("pricing kernel rejects bad inputs and the unit-EIS point") {
  const Economy econ = baseline();
  REQUIRE_THROWS_AS(sdf(0.0, econ, 62.0), model_error);
  REQUIRE_THROWS_AS(sdf(-1.0, econ, 62.0), model_error);
  REQUIRE_THROWS_AS(sdf(1.0, econ, 0.0), model_error);
  const Economy unit = validate({0.02, 10.0, 1.0}, {0.018, 0.036});
  REQUIRE_THROWS_AS(sdf(1.0, unit, eztree::pd_ratio(unit)), model_error);
  try {
    euler_residual_equity(unit, 100, 0);
    FAIL("expected UnitPsi");
  } catch (const model_error& e) {
    REQUIRE(e.code() == eztree::errc::unit_psi);
  }
}

TEST_CASE("Monte Carlo residuals vanish under the closed-form solution") {
  const Economy econ = baseline();
  const std::uint64_t n = 1u << 20;
  for (std::uint64_t seed : {0ULL, 42ULL}) {
    const McEstimate eq = euler_residual_equity(econ, n, seed);
    const McEstimate rf = euler_residual_riskfree(econ, n, seed);
    INFO("seed " << seed << " equity " << eq.mean << " +- " << eq.std_error);
    REQUIRE(eztree::passes_euler_check(eq));
    REQUIRE(eztree::passes_euler_check(rf));
    REQUIRE(eq.n_draws == n);
    REQUIRE(eq.seed == seed);
    REQUIRE(eq.std_error > 0.0);
  }
}

TEST_CASE("degenerate cases are exact") {
  // sigma = 0: the residual is pure float noise with zero standard error.
  const Economy det = validate({0.02, 10.0, 1.5}, {0.018, 0.0});
  for (std::uint64_t n : {1ULL, 2ULL, 1000ULL}) {
    const McEstimate eq = euler_residual_equity(det, n, 0);
    const McEstimate rf = euler_residual_riskfree(det, n, 0);
    REQUIRE_THAT(eq.mean, WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(rf.mean, WithinAbs(0.0, 1e-12));
    REQUIRE(eq.std_error == 0.0);
    REQUIRE(eztree::passes_euler_check(eq));
    REQUIRE(eztree::passes_euler_check(rf));
  }
  REQUIRE_THROWS_AS(euler_residual_equity(det, 0, 0), model_error);
}

TEST_CASE("a mispriced tree is rejected far outside the band") {
  const Economy econ = baseline();
  const double c_true = eztree::pd_ratio(econ);
  const double c_wrong = 1.05 * c_true;
  const std::size_t n = 1u << 17;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = eztree::growth_at(econ.endowment(), 11, i);
    const auto real = sdf(y, econ, c_wrong);
    const double d = real.m * real.r - 1.0;
    sum += d;
    sumsq += d * d;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq - n * mean * mean) / (n - 1.0) / n);
  REQUIRE(std::abs(mean) > 5.0 * se);

  // The analytic expectation of the mispriced residual agrees with the
  // sample: E[m r] - 1 with both legs priced off c_wrong.
  const double theta = -27.0;
  const double expected =
      std::exp(theta * (-0.02 + std::log1p(1.0 / c_wrong))) *
          lognormal_mean(1.0 - 10.0, 0.018, 0.001296) -
      1.0;
  REQUIRE(expected > 0.01);
  REQUIRE_THAT(mean, WithinAbs(expected, 3.0 * se));
}

TEST_CASE("estimates are bit-identical across thread counts") {
  const Economy econ = baseline();
  const std::uint64_t n = 300000;  // spans several chunks, last one ragged
  const McEstimate one = euler_residual_equity(econ, n, 42, {1, false});
  for (unsigned threads : {2u, 3u, 8u}) {
    const McEstimate many = euler_residual_equity(econ, n, 42, {threads, false});
    REQUIRE(many.mean == one.mean);
    REQUIRE(many.std_error == one.std_error);
  }
  const McEstimate rf_one = euler_residual_riskfree(econ, n, 42, {1, false});
  const McEstimate rf_many = euler_residual_riskfree(econ, n, 42, {5, false});
  REQUIRE(rf_many.mean == rf_one.mean);
  REQUIRE(rf_many.std_error == rf_one.std_error);
}

TEST_CASE("antithetic pairing keeps the verdict and reports the pair count") {
  const Economy econ = baseline();
  const std::uint64_t n = 1u << 18;
  const McEstimate plain = euler_residual_equity(econ, n, 42, {1, false});
  const McEstimate anti = euler_residual_equity(econ, n, 42, {1, true});
  REQUIRE(anti.n_draws == n);
  REQUIRE(anti.std_error > 0.0);
  REQUIRE(eztree::passes_euler_check(plain));
  REQUIRE(eztree::passes_euler_check(anti));
  // Odd n rounds up to a whole number of pairs.
  const McEstimate odd = euler_residual_equity(econ, 101, 42, {1, true});
  REQUIRE(odd.n_draws == 102);
}

TEST_CASE("quasi-analytic expectations hit one to ten digits") {
  eztest::EconomyStream stream(555);
  for (int k = 0; k < 200; ++k) {
    const Economy econ = stream.next();
    REQUIRE_THAT(euler_expectation_equity(econ), WithinAbs(1.0, 1e-10));
    REQUIRE_THAT(euler_expectation_riskfree(econ), WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("estimator agrees with a plain loop over the same draws") {
  // Same integrand, same draws, one evaluated through the estimator chunks
  // and one through a plain loop: identical reduction order, identical
  // bits; they must agree to rounding.
  const Economy econ = baseline();
  const std::uint64_t n = 70000;
  const McEstimate est = euler_residual_equity(econ, n, 9);
  const double c = eztree::pd_ratio(econ);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double y = eztree::growth_at(econ.endowment(), 9, i);
    const auto real = sdf(y, econ, c);
    sum += real.m * real.r - 1.0;
  }
  REQUIRE_THAT(est.mean, WithinAbs(sum / n, 1e-10));
}

TEST_CASE("verdict helper applies both the band and the absolute cap") {
  McEstimate e;
  e.mean = 5e-4;
  e.std_error = 2e-4;
  e.n_draws = 100;
  REQUIRE(eztree::passes_euler_check(e));       // 5e-4 < 3*2e-4
  e.mean = 7e-4;
  REQUIRE_FALSE(eztree::passes_euler_check(e)); // outside 3 SE
  e.std_error = 1e-2;
  e.mean = 2e-3;
  REQUIRE_FALSE(eztree::passes_euler_check(e)); // inside band, above cap
  e.mean = 0.0;
  e.std_error = 0.0;
  REQUIRE(eztree::passes_euler_check(e));       // exact case, floor applies
}
