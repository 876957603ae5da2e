#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "eztree/equilibrium.hpp"
#include "eztree/errors.hpp"
#include "eztree/model.hpp"
#include "eztree/rng.hpp"

namespace eztree {

/// Absolute cap on an acceptable Euler residual, on top of the 3-SE band.
inline constexpr double kMcAbsCap = 1e-3;

/// Rounding floor added to the 3-SE band. Degenerate runs (sigma = 0, or a
/// single draw) have zero standard error while the residual still carries
/// ~1e-16 of float noise; the floor keeps the verdict meaningful there.
inline constexpr double kMcRoundingFloor = 1e-12;

struct McEstimate {
  double mean{0.0};
  double std_error{0.0};  // sample standard deviation / sqrt(n_draws); 0 when n < 2
  std::uint64_t n_draws{0};
  std::uint64_t seed{0};
};

inline bool within_three_se(const McEstimate& e) {
  return std::abs(e.mean) <= 3.0 * e.std_error + kMcRoundingFloor;
}

/// Verdict used by the verify command and the oracle grid: 3-SE band plus
/// the absolute cap.
inline bool passes_euler_check(const McEstimate& e) {
  return within_three_se(e) && std::abs(e.mean) < kMcAbsCap;
}

/// One joint draw of the pricing kernel: SDF value m, gross equity return r
/// and the growth realization y that generated both.
struct SdfRealization {
  double m;
  double r;
  double y;
};

namespace detail {

/// Per-economy constants of the log-space SDF evaluation.
struct SdfParams {
  double theta;
  double inv_psi;
  double ln_beta;
  double ln_growth_factor;  // ln((1+c)/c)
  double mu;
  double sigma;
};

inline SdfParams make_sdf_params(const Economy& econ, double c) {
  SdfParams sp;
  sp.theta = theta(econ.preferences());  // throws unit_psi near psi = 1
  sp.inv_psi = 1.0 / econ.preferences().psi;
  sp.ln_beta = -econ.preferences().delta;
  sp.ln_growth_factor = std::log1p(1.0 / c);
  sp.mu = econ.endowment().mu;
  sp.sigma = econ.endowment().sigma;
  return sp;
}

/// ln m = theta (ln beta - (1/psi) ln y) + (theta - 1) ln r. Everything in
/// logs: theta can be large (e.g. -27), so direct powers would overflow.
inline double log_sdf(const SdfParams& sp, double ln_y, double ln_r) {
  return sp.theta * (sp.ln_beta - sp.inv_psi * ln_y) + (sp.theta - 1.0) * ln_r;
}

/// Fixed chunk width of the estimator. Partial sums are always combined in
/// chunk order, so the result is bit-identical for any worker count.
inline constexpr std::uint64_t kChunkDraws = 1u << 16;

template <typename SampleAt>
McEstimate chunked_estimate(std::uint64_t n_units, std::uint64_t n_report,
                            std::uint64_t seed, unsigned threads,
                            SampleAt&& sample_at) {
  const std::uint64_t n_chunks = (n_units + kChunkDraws - 1) / kChunkDraws;
  std::vector<std::array<double, 2>> partials(n_chunks, {0.0, 0.0});

  auto run_chunk = [&](std::uint64_t k) {
    const std::uint64_t lo = k * kChunkDraws;
    const std::uint64_t hi = std::min(n_units, lo + kChunkDraws);
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double d = sample_at(i);
      sum += d;
      sumsq += d * d;
    }
    partials[k] = {sum, sumsq};
  };

  if (threads <= 1 || n_chunks == 1) {
    for (std::uint64_t k = 0; k < n_chunks; ++k) run_chunk(k);
  } else {
    std::atomic<std::uint64_t> next{0};
    const unsigned n_workers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, n_chunks));
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
      workers.emplace_back([&] {
        for (std::uint64_t k = next.fetch_add(1); k < n_chunks; k = next.fetch_add(1)) {
          run_chunk(k);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  double sum = 0.0, sumsq = 0.0;
  for (const auto& part : partials) {
    sum += part[0];
    sumsq += part[1];
  }
  const double n = static_cast<double>(n_units);
  McEstimate est;
  est.mean = sum / n;
  est.n_draws = n_report;
  est.seed = seed;
  if (n_units >= 2) {
    const double var = std::max(0.0, (sumsq - n * est.mean * est.mean) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

struct EulerIntegrand {
  SdfParams sp;
  double ln_extra;  // equity: 0 (ln r added per draw); risk-free: ln R_F
  bool add_ln_r;

  double operator()(double z) const {
    const double ln_y = sp.mu + sp.sigma * z;
    const double ln_r = sp.ln_growth_factor + ln_y;
    const double ln_tail = add_ln_r ? ln_r : ln_extra;
    return std::expm1(log_sdf(sp, ln_y, ln_r) + ln_tail);
  }
};

}  // namespace detail

struct EstimateOptions {
  unsigned threads = 1;
  bool antithetic = false;  // pairs (+z,-z); n is rounded up to even
};

/// SDF realization for a given growth draw and price-dividend ratio c.
/// r is exactly ((1+c)/c) y; m is evaluated in log space.
inline SdfRealization sdf(double y, const Economy& econ, double c) {
  if (!(y > 0.0) || !std::isfinite(y) || !(c > 0.0) || !std::isfinite(c)) {
    raise(errc::non_positive_input,
          "y = " + std::to_string(y) + ", c = " + std::to_string(c));
  }
  const detail::SdfParams sp = detail::make_sdf_params(econ, c);
  const double ln_y = std::log(y);
  const double ln_r = sp.ln_growth_factor + ln_y;
  SdfRealization out;
  out.y = y;
  out.r = (1.0 + c) / c * y;
  out.m = std::exp(detail::log_sdf(sp, ln_y, ln_r));
  return out;
}

namespace detail {

inline McEstimate euler_residual(const Economy& econ, std::uint64_t n,
                                 std::uint64_t seed, const EstimateOptions& opts,
                                 bool equity) {
  if (n == 0) raise(errc::zero_draws, "need at least one draw");
  const double c = pd_ratio(econ);
  EulerIntegrand f;
  f.sp = make_sdf_params(econ, c);
  f.add_ln_r = equity;
  f.ln_extra = equity ? 0.0 : risk_free_log(econ);

  if (!opts.antithetic) {
    return chunked_estimate(n, n, seed, opts.threads, [&f, seed](std::uint64_t i) {
      return f(normal_at(seed, i));
    });
  }
  const std::uint64_t pairs = (n + 1) / 2;
  return chunked_estimate(pairs, 2 * pairs, seed, opts.threads,
                          [&f, seed](std::uint64_t j) {
                            const double z = normal_at(seed, j);
                            return 0.5 * (f(z) + f(-z));
                          });
}

}  // namespace detail

/// Monte Carlo estimate of E[m r] - 1 under the closed-form price. Zero in
/// expectation when the pricing condition holds.
inline McEstimate euler_residual_equity(const Economy& econ, std::uint64_t n,
                                        std::uint64_t seed,
                                        const EstimateOptions& opts = {}) {
  return detail::euler_residual(econ, n, seed, opts, /*equity=*/true);
}

/// Monte Carlo estimate of E[m] R_F - 1 under the closed-form risk-free rate.
inline McEstimate euler_residual_riskfree(const Economy& econ, std::uint64_t n,
                                          std::uint64_t seed,
                                          const EstimateOptions& opts = {}) {
  return detail::euler_residual(econ, n, seed, opts, /*equity=*/false);
}

/// E[e^{a z}] = exp(a mean + a^2 var / 2) for z ~ N(mean, var).
inline double lognormal_mean(double a, double mean, double var) {
  if (var < 0.0) raise(errc::negative_variance, "var = " + std::to_string(var));
  return std::exp(a * mean + 0.5 * a * a * var);
}

/// E[m r] with the expectation taken by the lognormal moment identity
/// instead of sampling. Equals 1 up to float rounding when c solves the
/// pricing condition; the exponent on y collapses to 1 - gamma.
inline double euler_expectation_equity(const Economy& econ) {
  const double c = pd_ratio(econ);
  const detail::SdfParams sp = detail::make_sdf_params(econ, c);
  const double gamma = econ.preferences().gamma;
  return std::exp(sp.theta * (sp.ln_beta + sp.ln_growth_factor)) *
         lognormal_mean(1.0 - gamma, sp.mu, econ.endowment().variance());
}

/// E[m] R_F by the same moment identity; the exponent on y collapses to
/// -gamma. Equals 1 when the closed-form risk-free rate is used.
inline double euler_expectation_riskfree(const Economy& econ) {
  const double c = pd_ratio(econ);
  const detail::SdfParams sp = detail::make_sdf_params(econ, c);
  const double gamma = econ.preferences().gamma;
  return std::exp(sp.theta * sp.ln_beta + (sp.theta - 1.0) * sp.ln_growth_factor +
                  risk_free_log(econ)) *
         lognormal_mean(-gamma, sp.mu, econ.endowment().variance());
}

}  // namespace eztree
