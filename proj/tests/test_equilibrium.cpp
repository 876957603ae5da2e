#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eztree/equilibrium.hpp"
#include "eztree/model.hpp"
#include "support/crra_oracle.hpp"
#include "support/economy_stream.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using eztree::Economy;
using eztree::Endowment;
using eztree::EquilibriumSolution;
using eztree::errc;
using eztree::model_error;
using eztree::Preferences;
using eztree::solve;
using eztree::validate;

namespace {

Economy baseline() { return validate({0.02, 10.0, 1.5}, {0.018, 0.036}); }

}  // namespace

TEST_CASE("baseline equilibrium matches the high-precision reference") {
  const EquilibriumSolution s = solve(baseline());
  CHECK_THAT(s.a_factor, WithinRel(-0.015944, 1e-12));
  CHECK_THAT(s.pd_ratio, WithinRel(62.220846975136684, 1e-12));
  CHECK_THAT(s.ln_rf, WithinRel(0.021632, 1e-12));
  CHECK_THAT(s.premium, WithinRel(0.01296, 1e-12));
  CHECK_THAT(s.e_ln_r, WithinRel(0.033944, 1e-12));
  CHECK_THAT(s.ln_e_r, WithinRel(0.034592, 1e-12));
}

TEST_CASE("unit EIS separates taste for smoothing from taste for risk") {
  // At psi = 1 the margin collapses to A = -delta: price-dividend ratio
  // depends on delta alone.
  for (double gamma : {0.0, 1.0, 5.0, 10.0}) {
    for (double mu : {0.0, 0.018, 0.05}) {
      const Economy econ = validate({0.02, gamma, 1.0}, {mu, 0.036});
      REQUIRE(econ.a_factor() == -0.02);
      REQUIRE_THAT(eztree::pd_ratio(econ), WithinRel(49.501666655555661, 1e-12));
    }
  }
}

TEST_CASE("deterministic growth prices the tree by pure discounting") {
  const Economy econ = validate({0.02, 10.0, 1.5}, {0.018, 0.0});
  const EquilibriumSolution s = solve(econ);
  // A = -0.02 + (1/3) 0.018 = -0.014
  CHECK_THAT(s.a_factor, WithinRel(-0.014, 1e-12));
  CHECK_THAT(s.ln_rf, WithinRel(0.02 + 0.018 / 1.5, 1e-12));
  CHECK(s.premium == 0.0);
  CHECK(s.e_ln_r == s.ln_e_r);
  CHECK_THAT(s.e_ln_r, WithinRel(s.ln_rf, 1e-12));
}

TEST_CASE("risk-neutral pricing carries no premium") {
  const Economy econ = validate({0.02, 0.0, 1.5}, {0.018, 0.036});
  const EquilibriumSolution s = solve(econ);
  CHECK(s.premium == 0.0);
  CHECK_THAT(s.ln_rf, WithinRel(0.02 + (0.018 + 0.5 * 0.001296) / 1.5, 1e-12));
  CHECK_THAT(s.ln_e_r, WithinRel(s.ln_rf, 1e-12));
}

TEST_CASE("price-dividend ratio diverges as the margin approaches zero") {
  REQUIRE_THROWS_AS(eztree::pd_ratio_from_factor(0.0), model_error);
  REQUIRE_THROWS_AS(eztree::pd_ratio_from_factor(0.015), model_error);
  REQUIRE(eztree::pd_ratio_from_factor(-1e-15) > 9e14);
  REQUIRE(eztree::pd_ratio_from_factor(-50.0) < 1e-21);
}

TEST_CASE("equity price scales linearly in the dividend") {
  const Economy econ = baseline();
  CHECK_THAT(eztree::equity_price(econ, 1.0), WithinRel(62.220846975136684, 1e-12));
  CHECK_THAT(eztree::equity_price(econ, 3.5),
             WithinRel(3.5 * 62.220846975136684, 1e-12));
  REQUIRE_THROWS_AS(eztree::equity_price(econ, 0.0), model_error);
  REQUIRE_THROWS_AS(eztree::equity_price(econ, -2.0), model_error);
}

TEST_CASE("both pricing routes agree (identity chain)") {
  eztest::EconomyStream stream(77);
  for (int k = 0; k < 300; ++k) {
    const Economy econ = stream.next();
    const double direct = eztree::equity_price(econ, 1.0);
    const double via_er = eztree::equity_price_via_expected_return(econ, 1.0);
    REQUIRE_THAT(via_er, WithinRel(direct, 1e-10));
  }
}

TEST_CASE("closed-form identities hold on random feasible economies") {
  eztest::EconomyStream stream(31337);
  for (int k = 0; k < 300; ++k) {
    const Economy econ = stream.next();
    const EquilibriumSolution s = solve(econ);
    const double mu = econ.endowment().mu;
    const double var = econ.endowment().variance();
    const double gamma = econ.preferences().gamma;
    // A + ln E R = mu + sigma^2/2
    REQUIRE_THAT(s.a_factor + s.ln_e_r, WithinAbs(mu + 0.5 * var, 1e-10));
    // ln E R - ln R_F = gamma sigma^2
    REQUIRE_THAT(s.ln_e_r - s.ln_rf, WithinAbs(gamma * var, 1e-10));
    // E ln R = -A + mu
    REQUIRE_THAT(s.e_ln_r, WithinAbs(-s.a_factor + mu, 1e-10));
    // c/(1+c) = e^A
    REQUIRE_THAT(s.pd_ratio / (1.0 + s.pd_ratio), WithinRel(std::exp(s.a_factor), 1e-10));
  }
}

TEST_CASE("rates respond monotonically to impatience and risk") {
  double prev_rf = -1.0;
  for (double delta : {0.005, 0.01, 0.02, 0.04}) {
    const double rf = solve(validate({delta, 10.0, 1.5}, {0.018, 0.036})).ln_rf;
    REQUIRE(rf > prev_rf);
    prev_rf = rf;
  }
  double prev_premium = -1.0;
  for (double gamma : {0.0, 1.0, 5.0, 10.0}) {
    const double p = solve(validate({0.02, gamma, 1.5}, {0.018, 0.036})).premium;
    REQUIRE(p > prev_premium);
    prev_premium = p;
  }
}

TEST_CASE("recursive solution collapses to the CRRA benchmark at gamma = 1/psi") {
  const struct {
    double delta, g, mu, sigma;
  } points[] = {
      {0.02, 2.0, 0.018, 0.036},
      {0.01, 4.0, 0.018, 0.018},
      {0.05, 0.5, 0.0, 0.036},
      {0.03, 3.0, 0.01, 0.02},
  };
  for (const auto& pt : points) {
    const Economy econ = validate({pt.delta, pt.g, 1.0 / pt.g}, {pt.mu, pt.sigma});
    const EquilibriumSolution s = solve(econ);
    const eztest::CrraOracle oracle{pt.delta, pt.g, pt.mu, pt.sigma};
    REQUIRE_THAT(s.a_factor, WithinRel(oracle.a_factor(), 1e-12));
    REQUIRE_THAT(s.pd_ratio, WithinRel(oracle.pd_ratio(), 1e-12));
    REQUIRE_THAT(s.ln_rf, WithinRel(oracle.risk_free_log(), 1e-12));
    REQUIRE_THAT(s.e_ln_r, WithinRel(oracle.expected_log_return(), 1e-12));
    REQUIRE_THAT(s.ln_e_r, WithinRel(oracle.expected_return_log(), 1e-12));
    REQUIRE_THAT(s.premium, WithinAbs(oracle.premium(), 1e-12));
  }
}

TEST_CASE("CRRA risk-free rate reproduces the textbook expression") {
  // gamma = 2, psi = 0.5: ln R_F = delta + gamma mu - gamma^2 sigma^2 / 2.
  const EquilibriumSolution s = solve(validate({0.02, 2.0, 0.5}, {0.018, 0.036}));
  CHECK_THAT(s.ln_rf, WithinRel(0.053408, 1e-12));
  CHECK_THAT(s.a_factor, WithinRel(-0.037352, 1e-12));
}

TEST_CASE("solution is continuous across the unit-EIS point") {
  const EquilibriumSolution at_one = solve(validate({0.02, 10.0, 1.0}, {0.018, 0.036}));
  for (double psi : {1.0 - 1e-6, 1.0 + 1e-6}) {
    const EquilibriumSolution s = solve(validate({0.02, 10.0, psi}, {0.018, 0.036}));
    CHECK_THAT(s.a_factor, WithinRel(at_one.a_factor, 1e-4));
    CHECK_THAT(s.pd_ratio, WithinRel(at_one.pd_ratio, 1e-4));
    CHECK_THAT(s.ln_rf, WithinRel(at_one.ln_rf, 1e-4));
    CHECK_THAT(s.premium, WithinRel(at_one.premium, 1e-4));
    CHECK_THAT(s.ln_e_r, WithinRel(at_one.ln_e_r, 1e-4));
  }
}
