#pragma once

#include <cmath>
#include <string>

#include "eztree/errors.hpp"
#include "eztree/model.hpp"

namespace eztree {

/// All closed-form equilibrium quantities. Rates are log (continuously
/// compounded) gross rates; net simple rates are presentation-layer views.
struct EquilibriumSolution {
  double a_factor;  // A = ln[c/(1+c)]
  double pd_ratio;  // c, price per unit of current dividend
  double ln_rf;     // log gross risk-free rate
  double premium;   // ln E(R) - ln R_F = gamma sigma^2
  double e_ln_r;    // E ln R
  double ln_e_r;    // ln E R = E ln R + sigma^2/2
};

inline double log_pd_factor(const Economy& econ) { return econ.a_factor(); }

/// c = e^A / (1 - e^A), evaluated as 1/expm1(-A) to stay accurate as A -> 0-.
inline double pd_ratio_from_factor(double a_factor) {
  if (!(a_factor < 0.0)) {
    raise(errc::no_equilibrium,
          "existence margin A = " + std::to_string(a_factor) + " (requires A < 0)");
  }
  return 1.0 / std::expm1(-a_factor);
}

inline double pd_ratio(const Economy& econ) {
  return pd_ratio_from_factor(econ.a_factor());
}

/// ln R_F = delta + (1/psi)(mu + sigma^2/2) - (1/2) gamma (1 + 1/psi) sigma^2.
inline double risk_free_log(const Economy& econ) {
  const Preferences& p = econ.preferences();
  const Endowment& e = econ.endowment();
  const double inv_psi = 1.0 / p.psi;
  return p.delta + inv_psi * (e.mu + 0.5 * e.variance()) -
         0.5 * p.gamma * (1.0 + inv_psi) * e.variance();
}

/// Log equity premium, gamma sigma^2.
inline double equity_premium(const Economy& econ) {
  return econ.preferences().gamma * econ.endowment().variance();
}

/// E ln R = delta + mu/psi - (1/2)(1 - 1/psi)(1 - gamma) sigma^2,
/// identically equal to -A + mu.
inline double expected_log_return(const Economy& econ) {
  const Preferences& p = econ.preferences();
  const Endowment& e = econ.endowment();
  const double slope = 1.0 - 1.0 / p.psi;
  return p.delta + e.mu / p.psi - 0.5 * slope * (1.0 - p.gamma) * e.variance();
}

/// ln E R = E ln R + sigma^2/2 (ln R is normal with variance sigma^2).
inline double expected_return_log(const Economy& econ) {
  return expected_log_return(econ) + 0.5 * econ.endowment().variance();
}

/// Price of the tree at current dividend q: p = c q.
inline double equity_price(const Economy& econ, double dividend) {
  if (!(dividend > 0.0) || !std::isfinite(dividend)) {
    raise(errc::non_positive_dividend, "dividend = " + std::to_string(dividend));
  }
  return pd_ratio(econ) * dividend;
}

/// Same price through the expected-return identity: with
/// X = mu + sigma^2/2 - ln E(R), p = e^X/(1 - e^X) q. X equals A
/// algebraically, so the two routes must agree; this one exists as a
/// cross-check of the identity chain.
inline double equity_price_via_expected_return(const Economy& econ, double dividend) {
  if (!(dividend > 0.0) || !std::isfinite(dividend)) {
    raise(errc::non_positive_dividend, "dividend = " + std::to_string(dividend));
  }
  const Endowment& e = econ.endowment();
  const double x = e.mu + 0.5 * e.variance() - expected_return_log(econ);
  return pd_ratio_from_factor(x) * dividend;
}

inline EquilibriumSolution solve(const Economy& econ) {
  EquilibriumSolution s;
  s.a_factor = log_pd_factor(econ);
  s.pd_ratio = pd_ratio_from_factor(s.a_factor);
  s.ln_rf = risk_free_log(econ);
  s.premium = equity_premium(econ);
  s.e_ln_r = expected_log_return(econ);
  s.ln_e_r = expected_return_log(econ);
  return s;
}

}  // namespace eztree
