#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "eztree/equilibrium.hpp"
#include "eztree/errors.hpp"
#include "eztree/model.hpp"

namespace eztree {

/// Threshold on the analytic price derivative below which the price is
/// reported as insensitive to risk aversion.
inline constexpr double kRegimeTol = 1e-15;

/// Comparative-statics direction of the equity price when risk aversion
/// rises (a "panic" repricing). Falls iff psi > 1, rises iff psi < 1,
/// insensitive at psi = 1 or sigma = 0.
enum class PanicRegime {
  price_falls_in_panic,
  price_rises_in_panic,
  price_insensitive,
};

inline const char* to_string(PanicRegime r) {
  switch (r) {
    case PanicRegime::price_falls_in_panic: return "PriceFallsInPanic";
    case PanicRegime::price_rises_in_panic: return "PriceRisesInPanic";
    case PanicRegime::price_insensitive: return "PriceInsensitive";
  }
  return "?";
}

/// d ln E(R) / d gamma = (sigma^2/2)(1 - 1/psi).
inline double d_ln_er_d_gamma(const Economy& econ) {
  return 0.5 * econ.endowment().variance() * (1.0 - 1.0 / econ.preferences().psi);
}

/// Partials of the risk-free rate and the premium in gamma:
/// (-1/2 (1 + 1/psi) sigma^2, sigma^2). They always carry opposite signs
/// for sigma > 0, which is why the sum can take either sign; it equals
/// d_ln_er_d_gamma exactly.
inline std::pair<double, double> decompose(const Economy& econ) {
  const double var = econ.endowment().variance();
  return {-0.5 * (1.0 + 1.0 / econ.preferences().psi) * var, var};
}

/// dA/dgamma = -1/2 (1 - 1/psi) sigma^2.
inline double d_a_factor_d_gamma(const Economy& econ) {
  return -0.5 * (1.0 - 1.0 / econ.preferences().psi) * econ.endowment().variance();
}

/// dc/dgamma by the chain rule on c = e^A/(1 - e^A):
/// dc/dA = e^A/(1 - e^A)^2.
inline double d_pd_d_gamma(const Economy& econ) {
  const double ea = std::exp(econ.a_factor());
  const double dcda = ea / ((1.0 - ea) * (1.0 - ea));
  return dcda * d_a_factor_d_gamma(econ);
}

/// Same derivative through the expected-return route,
/// c = e^X/(1 - e^X) with X = mu + sigma^2/2 - ln E(R); dX/dgamma is the
/// negative of d_ln_er_d_gamma. Cross-check of the identity chain.
inline double d_pd_d_gamma_via_expected_return(const Economy& econ) {
  const double x =
      econ.endowment().mu + 0.5 * econ.endowment().variance() - expected_return_log(econ);
  const double ex = std::exp(x);
  const double dcdx = ex / ((1.0 - ex) * (1.0 - ex));
  return dcdx * (-d_ln_er_d_gamma(econ));
}

inline PanicRegime panic_regime(const Economy& econ, double tol = kRegimeTol) {
  const double d = d_pd_d_gamma(econ);
  if (d < -tol) return PanicRegime::price_falls_in_panic;
  if (d > tol) return PanicRegime::price_rises_in_panic;
  return PanicRegime::price_insensitive;
}

struct SensitivityReport {
  double d_ln_rf_d_gamma;
  double d_premium_d_gamma;
  double d_ln_er_d_gamma;
  double d_pd_d_gamma;
  PanicRegime regime;
};

inline SensitivityReport analyze(const Economy& econ) {
  SensitivityReport rep;
  const auto parts = decompose(econ);
  rep.d_ln_rf_d_gamma = parts.first;
  rep.d_premium_d_gamma = parts.second;
  rep.d_ln_er_d_gamma = d_ln_er_d_gamma(econ);
  rep.d_pd_d_gamma = d_pd_d_gamma(econ);
  rep.regime = panic_regime(econ);
  return rep;
}

/// Analytic derivative vs its central finite difference at step h.
struct DerivativeCheck {
  double analytic;
  double numeric;
  double abs_error;
};

struct FiniteDifferenceReport {
  DerivativeCheck ln_er;    // d ln E(R) / d gamma
  DerivativeCheck ln_rf;    // d ln R_F / d gamma
  DerivativeCheck premium;  // d premium / d gamma
  DerivativeCheck pd;       // dc / d gamma
  double step;
  bool cancellation_warning;  // h so small that float cancellation dominates
};

/// Step below which central differences of these ~1e-2-scale quantities are
/// dominated by rounding rather than truncation.
inline constexpr double kFdCancellationStep = 1e-8;

/// Central finite differences in gamma of ln E(R), ln R_F, the premium and
/// c, against their analytic derivatives. Both displaced parameter sets must
/// validate, so gamma >= h is required.
inline FiniteDifferenceReport finite_difference_check(const Economy& econ, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    raise(errc::non_positive_input, "step h = " + std::to_string(h));
  }
  const Preferences& p = econ.preferences();
  if (p.gamma - h < 0.0) {
    raise(errc::step_too_large,
          "gamma - h = " + std::to_string(p.gamma - h) + " is out of range");
  }
  Preferences lo = p, hi = p;
  lo.gamma -= h;
  hi.gamma += h;
  const Economy econ_lo = validate(lo, econ.endowment());
  const Economy econ_hi = validate(hi, econ.endowment());

  auto central = [h](double f_hi, double f_lo) { return (f_hi - f_lo) / (2.0 * h); };
  auto check = [](double analytic, double numeric) {
    return DerivativeCheck{analytic, numeric, std::abs(numeric - analytic)};
  };

  FiniteDifferenceReport rep;
  rep.step = h;
  rep.cancellation_warning = h < kFdCancellationStep;
  rep.ln_er = check(d_ln_er_d_gamma(econ),
                    central(expected_return_log(econ_hi), expected_return_log(econ_lo)));
  rep.ln_rf = check(decompose(econ).first,
                    central(risk_free_log(econ_hi), risk_free_log(econ_lo)));
  rep.premium = check(decompose(econ).second,
                      central(equity_premium(econ_hi), equity_premium(econ_lo)));
  rep.pd = check(d_pd_d_gamma(econ), central(pd_ratio(econ_hi), pd_ratio(econ_lo)));
  return rep;
}

}  // namespace eztree
