#pragma once

#include <stdexcept>
#include <string>

namespace eztree {

/// Failure conditions surfaced by the library. Each maps 1:1 onto a thrown
/// model_error; the CLI translates them into stable process exit codes.
enum class errc {
  non_positive_psi,
  negative_gamma,
  negative_sigma,
  non_finite,
  no_equilibrium,
  unit_psi,
  non_positive_input,
  non_positive_dividend,
  zero_draws,
  negative_variance,
  step_too_large,
  path_too_short,
  empty_grid,
  invalid_range,
  io_failure,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::non_positive_psi: return "NonPositivePsi";
    case errc::negative_gamma: return "NegativeGamma";
    case errc::negative_sigma: return "NegativeSigma";
    case errc::non_finite: return "NonFinite";
    case errc::no_equilibrium: return "NoEquilibrium";
    case errc::unit_psi: return "UnitPsi";
    case errc::non_positive_input: return "NonPositiveInput";
    case errc::non_positive_dividend: return "NonPositiveDividend";
    case errc::zero_draws: return "ZeroDraws";
    case errc::negative_variance: return "NegativeVariance";
    case errc::step_too_large: return "StepTooLarge";
    case errc::path_too_short: return "PathTooShort";
    case errc::empty_grid: return "EmptyGrid";
    case errc::invalid_range: return "InvalidRange";
    case errc::io_failure: return "IoFailure";
  }
  return "UnknownError";
}

class model_error : public std::runtime_error {
 public:
  model_error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw model_error(code, what);
}

}  // namespace eztree
