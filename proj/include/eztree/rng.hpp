#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "eztree/errors.hpp"
#include "eztree/model.hpp"

namespace eztree {

/// Identifier pinned into run manifests. Draw i of a stream is a pure
/// function of (seed, i), so estimates can be chunked across workers
/// without changing results.
inline constexpr const char* kRngId = "splitmix64-counter/as241-inverse-cdf";

/// i-th output of SplitMix64 seeded with `seed`, in counter form:
/// mix(seed + (i+1) * golden_gamma). Matches the sequential reference
/// stream output-for-output.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Top 52 bits mapped to the open interval (0,1); the half offset keeps
/// both endpoints unreachable so the normal quantile stays finite. 52 bits
/// (not 53) so that even the largest value, 1 - 2^-53, is exact: with 53
/// bits the +0.5 at the top end rounds to 2^53 and the result collapses
/// to 1.0.
inline double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Inverse standard normal CDF, Wichura's algorithm AS241 (PPND16).
/// Accurate to ~1e-15 relative over (0,1).
inline double inverse_normal_cdf(double p) {
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        ((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
             6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
           1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
         1.3314166789178437745e+2) * r + 3.3871328727963666080e+0;
    const double den =
        ((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
             3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
           5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
         4.2313330701600911252e+1) * r + 1.0;
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  if (!(r > 0.0)) return q < 0.0 ? -HUGE_VAL : HUGE_VAL;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        ((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
             2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
           3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
         4.63033784615654529590e+0) * r + 1.42343711074968357734e+0;
    const double den =
        ((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
             1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
           6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
         2.05319162663775882187e+0) * r + 1.0;
    x = num / den;
  } else {
    r -= 5.0;
    const double num =
        ((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
             1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
           2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
         5.46378491116411436990e+0) * r + 6.65790464350110377720e+0;
    const double den =
        ((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
             1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
           1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
         5.99832206555887937690e-1) * r + 1.0;
    x = num / den;
  }
  return q < 0.0 ? -x : x;
}

/// Standard normal draw i of the stream identified by `seed`.
inline double normal_at(std::uint64_t seed, std::uint64_t i) {
  return inverse_normal_cdf(to_unit_open(splitmix64_at(seed, i)));
}

/// Gross growth draw i: y = exp(mu + sigma z), z standard normal.
inline double growth_at(const Endowment& endow, std::uint64_t seed, std::uint64_t i) {
  return std::exp(endow.mu + endow.sigma * normal_at(seed, i));
}

/// n i.i.d. lognormal growth draws. Deterministic in (endow, n, seed).
inline std::vector<double> draw_growth(const Endowment& endow, std::size_t n,
                                       std::uint64_t seed) {
  if (n == 0) raise(errc::zero_draws, "need at least one draw");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = growth_at(endow, seed, i);
  return out;
}

}  // namespace eztree
