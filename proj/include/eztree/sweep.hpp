#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "eztree/equilibrium.hpp"
#include "eztree/errors.hpp"
#include "eztree/model.hpp"
#include "eztree/sensitivity.hpp"

namespace eztree {

/// Shortest round-trippable rendering: 17 significant digits.
inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// One grid cell. Infeasible cells (existence margin A >= 0) keep their
/// inputs and carry no outputs; they are reported, never dropped, so regime
/// maps show the feasibility boundary.
struct SweepRow {
  double gamma, psi, delta, mu, sigma;
  bool feasible;
  std::optional<double> a_factor, pd_ratio, ln_rf, premium, ln_e_r, d_pd_d_gamma;
  std::optional<PanicRegime> regime;
};

/// Axis values for each swept parameter, all with inclusive endpoints.
struct GridSpec {
  std::vector<double> gamma, psi, delta, mu, sigma;
};

/// Parses one axis: "lo:hi:n" (n evenly spaced points, endpoints included),
/// "v1,v2,..." or a single value.
inline std::vector<double> parse_axis(const std::string& text) {
  if (text.empty()) raise(errc::empty_grid, "empty axis specification");

  auto parse_num = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      raise(errc::invalid_range, "cannot parse '" + s + "' as a number");
    }
    if (pos != s.size()) raise(errc::invalid_range, "trailing junk in '" + s + "'");
    if (!std::isfinite(v)) raise(errc::invalid_range, "non-finite value in '" + s + "'");
    return v;
  };

  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
      raise(errc::invalid_range, "range must be lo:hi:n, got '" + text + "'");
    }
    const double lo = parse_num(text.substr(0, c1));
    const double hi = parse_num(text.substr(c1 + 1, c2 - c1 - 1));
    long n = 0;
    try {
      n = std::stol(text.substr(c2 + 1));
    } catch (const std::exception&) {
      raise(errc::invalid_range, "bad point count in '" + text + "'");
    }
    if (lo > hi) {
      raise(errc::invalid_range,
            "lo " + fmt17(lo) + " exceeds hi " + fmt17(hi) + " in '" + text + "'");
    }
    if (n < 1) raise(errc::invalid_range, "point count must be >= 1 in '" + text + "'");
    if (n == 1) {
      out.push_back(lo);
    } else {
      for (long i = 0; i < n; ++i) {
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
      }
    }
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                     : comma - start);
    out.push_back(parse_num(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Evaluates every cell in lexicographic order (gamma, psi, delta, mu,
/// sigma). A >= 0 flags the row infeasible; domain-invalid values (psi <= 0,
/// gamma < 0, sigma < 0, non-finite) abort the sweep with the validation
/// error naming the cell.
inline std::vector<SweepRow> sweep(const GridSpec& grid) {
  if (grid.gamma.empty() || grid.psi.empty() || grid.delta.empty() || grid.mu.empty() ||
      grid.sigma.empty()) {
    raise(errc::empty_grid, "every axis needs at least one value");
  }
  std::vector<SweepRow> rows;
  rows.reserve(grid.gamma.size() * grid.psi.size() * grid.delta.size() *
               grid.mu.size() * grid.sigma.size());
  for (double g : grid.gamma)
    for (double p : grid.psi)
      for (double d : grid.delta)
        for (double m : grid.mu)
          for (double s : grid.sigma) {
            SweepRow row;
            row.gamma = g;
            row.psi = p;
            row.delta = d;
            row.mu = m;
            row.sigma = s;
            try {
              const Economy econ = validate({d, g, p}, {m, s});
              const EquilibriumSolution sol = solve(econ);
              row.feasible = true;
              row.a_factor = sol.a_factor;
              row.pd_ratio = sol.pd_ratio;
              row.ln_rf = sol.ln_rf;
              row.premium = sol.premium;
              row.ln_e_r = sol.ln_e_r;
              row.d_pd_d_gamma = d_pd_d_gamma(econ);
              row.regime = panic_regime(econ);
            } catch (const model_error& err) {
              if (err.code() != errc::no_equilibrium) throw;
              row.feasible = false;
            }
            rows.push_back(row);
          }
  return rows;
}

inline constexpr const char* kSweepCsvHeader =
    "gamma,psi,delta,mu,sigma,feasible,a_factor,pd_ratio,ln_rf,premium,ln_e_r,"
    "d_pd_d_gamma,regime";

namespace detail {

inline std::string opt17(const std::optional<double>& v) {
  return v ? fmt17(*v) : std::string();
}

}  // namespace detail

/// CSV with the fixed 13-column schema, LF newlines, absent fields empty.
inline void emit_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << kSweepCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    os << fmt17(r.gamma) << ',' << fmt17(r.psi) << ',' << fmt17(r.delta) << ','
       << fmt17(r.mu) << ',' << fmt17(r.sigma) << ','
       << (r.feasible ? "true" : "false") << ',' << detail::opt17(r.a_factor) << ','
       << detail::opt17(r.pd_ratio) << ',' << detail::opt17(r.ln_rf) << ','
       << detail::opt17(r.premium) << ',' << detail::opt17(r.ln_e_r) << ','
       << detail::opt17(r.d_pd_d_gamma) << ','
       << (r.regime ? to_string(*r.regime) : "") << '\n';
  }
  if (!os) raise(errc::io_failure, "write failed while emitting rows");
}

/// JSON Lines: one object per row, absent fields null.
inline void emit_jsonl(const std::vector<SweepRow>& rows, std::ostream& os) {
  auto num = [](const std::optional<double>& v) {
    return v ? fmt17(*v) : std::string("null");
  };
  for (const SweepRow& r : rows) {
    os << "{\"gamma\":" << fmt17(r.gamma) << ",\"psi\":" << fmt17(r.psi)
       << ",\"delta\":" << fmt17(r.delta) << ",\"mu\":" << fmt17(r.mu)
       << ",\"sigma\":" << fmt17(r.sigma)
       << ",\"feasible\":" << (r.feasible ? "true" : "false")
       << ",\"a_factor\":" << num(r.a_factor) << ",\"pd_ratio\":" << num(r.pd_ratio)
       << ",\"ln_rf\":" << num(r.ln_rf) << ",\"premium\":" << num(r.premium)
       << ",\"ln_e_r\":" << num(r.ln_e_r)
       << ",\"d_pd_d_gamma\":" << num(r.d_pd_d_gamma) << ",\"regime\":"
       << (r.regime ? "\"" + std::string(to_string(*r.regime)) + "\"" : "null")
       << "}\n";
  }
  if (!os) raise(errc::io_failure, "write failed while emitting rows");
}

}  // namespace eztree
