#pragma once

#include <cmath>
#include <string>

#include "eztree/errors.hpp"

namespace eztree {

/// theta is treated as undefined when |1 - 1/psi| falls below this bound;
/// the closed forms stay valid at psi = 1 but every SDF-exponent consumer
/// rejects the neighbourhood.
inline constexpr double kUnitPsiTol = 1e-9;

/// Default tolerance for preference-regime classification.
inline constexpr double kClassifyTol = 1e-12;

/// Recursive-utility taste parameters: time discount rate delta (so the
/// discount factor is beta = e^-delta), relative risk aversion gamma, and
/// elasticity of intertemporal substitution psi.
struct Preferences {
  double delta{0.0};
  double gamma{0.0};
  double psi{1.0};

  double beta() const { return std::exp(-delta); }
};

/// Log dividend growth is i.i.d. normal with mean mu and std dev sigma.
struct Endowment {
  double mu{0.0};
  double sigma{0.0};

  double variance() const { return sigma * sigma; }
};

/// SDF exponent theta = (1 - gamma) / (1 - 1/psi).
/// Throws unit_psi inside the excluded band around psi = 1.
inline double theta(const Preferences& p) {
  const double denom = 1.0 - 1.0 / p.psi;
  if (std::abs(denom) < kUnitPsiTol) {
    raise(errc::unit_psi, "theta undefined at psi = " + std::to_string(p.psi));
  }
  return (1.0 - p.gamma) / denom;
}

enum class PreferenceRegime {
  expected_utility,  // gamma == 1/psi: recursion collapses to CRRA
  high_eis,          // psi > 1
  low_eis,           // psi < 1
  unit_eis,          // psi == 1
};

inline const char* to_string(PreferenceRegime r) {
  switch (r) {
    case PreferenceRegime::expected_utility: return "ExpectedUtility";
    case PreferenceRegime::high_eis: return "HighEIS";
    case PreferenceRegime::low_eis: return "LowEIS";
    case PreferenceRegime::unit_eis: return "UnitEIS";
  }
  return "?";
}

/// Expected-utility match takes precedence over the EIS split, so e.g.
/// (gamma=2, psi=0.5) classifies as ExpectedUtility, not LowEIS.
inline PreferenceRegime classify(const Preferences& p, double tol = kClassifyTol) {
  if (std::abs(p.gamma - 1.0 / p.psi) <= tol) return PreferenceRegime::expected_utility;
  if (std::abs(p.psi - 1.0) <= tol) return PreferenceRegime::unit_eis;
  if (p.psi > 1.0 + tol) return PreferenceRegime::high_eis;
  return PreferenceRegime::low_eis;
}

/// Log of the equilibrium pricing factor, A = ln[c/(1+c)]:
///   A = -delta + (1 - 1/psi) mu + (1/2)(1 - 1/psi)(1 - gamma) sigma^2.
/// The price-dividend ratio c = e^A/(1 - e^A) is positive and finite iff
/// A < 0, which makes A the existence margin of the economy.
inline double existence_margin(const Preferences& p, const Endowment& e) {
  const double slope = 1.0 - 1.0 / p.psi;
  return -p.delta + slope * e.mu + 0.5 * slope * (1.0 - p.gamma) * e.variance();
}

/// A parameter set that passed validation. Construction goes through
/// validate() only, so holding an Economy certifies every invariant,
/// including the existence margin A < 0.
class Economy {
 public:
  const Preferences& preferences() const { return prefs_; }
  const Endowment& endowment() const { return endow_; }

  /// Cached existence margin A (always < 0).
  double a_factor() const { return a_factor_; }

 private:
  Economy(const Preferences& p, const Endowment& e, double a)
      : prefs_(p), endow_(e), a_factor_(a) {}

  friend Economy validate(const Preferences&, const Endowment&);

  Preferences prefs_;
  Endowment endow_;
  double a_factor_;
};

inline Economy validate(const Preferences& prefs, const Endowment& endow) {
  if (!std::isfinite(prefs.delta) || !std::isfinite(prefs.gamma) ||
      !std::isfinite(prefs.psi) || !std::isfinite(endow.mu) ||
      !std::isfinite(endow.sigma)) {
    raise(errc::non_finite, "all parameters must be finite");
  }
  if (!(prefs.psi > 0.0)) {
    raise(errc::non_positive_psi, "psi = " + std::to_string(prefs.psi));
  }
  if (prefs.gamma < 0.0) {
    raise(errc::negative_gamma, "gamma = " + std::to_string(prefs.gamma));
  }
  if (endow.sigma < 0.0) {
    raise(errc::negative_sigma, "sigma = " + std::to_string(endow.sigma));
  }
  const double a = existence_margin(prefs, endow);
  if (!(a < 0.0)) {
    raise(errc::no_equilibrium,
          "price series diverges: existence margin A = " + std::to_string(a) +
              " (requires A < 0)");
  }
  return Economy(prefs, endow, a);
}

}  // namespace eztree
