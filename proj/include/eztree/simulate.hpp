#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "eztree/equilibrium.hpp"
#include "eztree/errors.hpp"
#include "eztree/model.hpp"
#include "eztree/rng.hpp"
#include "eztree/sensitivity.hpp"

namespace eztree {

/// A simulated dividend/price/return history. Dividends are tracked in log
/// space: long horizons with positive drift push q_t far past double range,
/// while every return-level quantity stays O(1). The level accessors
/// saturate to inf once exp overflows.
class Path {
 public:
  Path(Economy econ, std::uint64_t seed, double q0, std::vector<double> growths)
      : econ_(econ), seed_(seed), pd_ratio_(eztree::pd_ratio(econ)) {
    growths_ = std::move(growths);
    log_dividends_.reserve(growths_.size() + 1);
    log_dividends_.push_back(std::log(q0));
    gross_returns_.reserve(growths_.size());
    const double c = pd_ratio_;
    for (double y : growths_) {
      log_dividends_.push_back(log_dividends_.back() + std::log(y));
      // R_{t+1} = (p_{t+1} + q_{t+1})/p_t with p = c q, in dividend ratios
      gross_returns_.push_back((c * y + y) / c);
    }
  }

  const Economy& econ() const { return econ_; }
  std::uint64_t seed() const { return seed_; }
  double pd_ratio() const { return pd_ratio_; }

  /// Number of simulated transitions (gross returns).
  std::size_t periods() const { return gross_returns_.size(); }

  const std::vector<double>& growths() const { return growths_; }
  const std::vector<double>& gross_returns() const { return gross_returns_; }
  const std::vector<double>& log_dividends() const { return log_dividends_; }

  double dividend(std::size_t t) const { return std::exp(log_dividends_[t]); }
  double price(std::size_t t) const { return pd_ratio_ * std::exp(log_dividends_[t]); }

 private:
  Economy econ_;
  std::uint64_t seed_;
  double pd_ratio_;
  std::vector<double> growths_;
  std::vector<double> log_dividends_;
  std::vector<double> gross_returns_;
};

inline Path simulate_path(const Economy& econ, std::size_t periods, double q0,
                          std::uint64_t seed) {
  if (!(q0 > 0.0) || !std::isfinite(q0)) {
    raise(errc::non_positive_dividend, "q0 = " + std::to_string(q0));
  }
  return Path(econ, seed, q0, draw_growth(econ.endowment(), periods, seed));
}

/// Sample moments of ln R and ln y with standard errors. The SE of a sample
/// variance uses the normal-theory form s^2 sqrt(2/(n-1)).
struct MomentSummary {
  double mean_ln_r, se_mean_ln_r;
  double var_ln_r, se_var_ln_r;
  double mean_ln_y, se_mean_ln_y;
  double var_ln_y, se_var_ln_y;
  std::size_t n;
};

namespace detail {

inline void mean_var(const std::vector<double>& logs, double& mean, double& var) {
  double sum = 0.0;
  for (double v : logs) sum += v;
  mean = sum / static_cast<double>(logs.size());
  double ss = 0.0;
  for (double v : logs) ss += (v - mean) * (v - mean);
  var = ss / static_cast<double>(logs.size() - 1);
}

}  // namespace detail

inline MomentSummary estimate_moments(const Path& path) {
  const std::size_t n = path.periods();
  if (n < 2) raise(errc::path_too_short, "need at least 2 periods, got " + std::to_string(n));

  std::vector<double> ln_r(n), ln_y(n);
  for (std::size_t t = 0; t < n; ++t) {
    ln_r[t] = std::log(path.gross_returns()[t]);
    ln_y[t] = std::log(path.growths()[t]);
  }
  MomentSummary m;
  m.n = n;
  detail::mean_var(ln_r, m.mean_ln_r, m.var_ln_r);
  detail::mean_var(ln_y, m.mean_ln_y, m.var_ln_y);
  const double nd = static_cast<double>(n);
  m.se_mean_ln_r = std::sqrt(m.var_ln_r / nd);
  m.se_mean_ln_y = std::sqrt(m.var_ln_y / nd);
  m.se_var_ln_r = m.var_ln_r * std::sqrt(2.0 / (nd - 1.0));
  m.se_var_ln_y = m.var_ln_y * std::sqrt(2.0 / (nd - 1.0));
  return m;
}

/// Outcome of repricing the tree under a one-time permanent shift in risk
/// aversion, all other parameters fixed. Pure comparative statics: two
/// steady states, no transition dynamics.
struct ScenarioResult {
  double c_before;
  double c_after;
  double price_change_pct;  // c_after/c_before - 1
  PanicRegime regime;
};

inline ScenarioResult panic_episode(const Economy& econ, double gamma_from,
                                    double gamma_to) {
  Preferences before = econ.preferences(), after = econ.preferences();
  before.gamma = gamma_from;
  after.gamma = gamma_to;
  const Economy econ_before = validate(before, econ.endowment());
  const Economy econ_after = validate(after, econ.endowment());
  ScenarioResult r;
  r.c_before = pd_ratio(econ_before);
  r.c_after = pd_ratio(econ_after);
  r.price_change_pct = r.c_after / r.c_before - 1.0;
  r.regime = panic_regime(econ_before);
  return r;
}

}  // namespace eztree
