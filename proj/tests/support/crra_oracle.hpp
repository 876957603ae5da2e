#pragma once

#include <cmath>

namespace eztest {

/// Independently coded CRRA consumption-CAPM reference, written straight
/// from the power-utility pricing conditions rather than the recursive
/// forms in the library. With risk aversion g and lognormal growth
/// ln y ~ N(mu, sigma^2):
///   p/q = f / (1 - f)          with f = E[beta y^{1-g}]
///   R_F = 1 / E[beta y^{-g}]
/// and expectations given by E[y^a] = exp(a mu + a^2 sigma^2 / 2).
struct CrraOracle {
  double delta, g, mu, sigma;

  double growth_moment(double a) const {
    return std::exp(a * mu + 0.5 * a * a * sigma * sigma);
  }

  double pd_factor() const { return std::exp(-delta) * growth_moment(1.0 - g); }

  double pd_ratio() const {
    const double f = pd_factor();
    return f / (1.0 - f);
  }

  double a_factor() const { return std::log(pd_factor()); }

  double risk_free_log() const {
    return -std::log(std::exp(-delta) * growth_moment(-g));
  }

  double expected_log_return() const {
    const double c = pd_ratio();
    return std::log((1.0 + c) / c) + mu;
  }

  double expected_return_log() const {
    const double c = pd_ratio();
    return std::log((1.0 + c) / c * growth_moment(1.0));
  }

  double premium() const { return expected_return_log() - risk_free_log(); }
};

}  // namespace eztest
