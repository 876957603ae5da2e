// Command-line front end: solve / verify / sweep / panic / simulate.
//
// Exit codes: 0 success, 2 invalid input or infeasible economy,
// 3 statistical check failed, 4 unsupported region (psi = 1 for the
// sampling oracle). Results go to stdout (or --output), diagnostics to
// stderr, and every executed run writes a JSON manifest that pins the
// effective configuration, RNG identifier and seed.
//
// The optional --config file is flat "key=value" text ('#' starts a
// comment); keys are the flag names without the leading dashes, and flags
// given on the command line override file values.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eztree/equilibrium.hpp"
#include "eztree/errors.hpp"
#include "eztree/euler.hpp"
#include "eztree/manifest.hpp"
#include "eztree/model.hpp"
#include "eztree/sensitivity.hpp"
#include "eztree/simulate.hpp"
#include "eztree/sweep.hpp"
#include "eztree/version.hpp"

namespace {

using eztree::fmt17;

[[noreturn]] void bad_input(const std::string& what) {
  eztree::raise(eztree::errc::invalid_range, what);
}

/// Registers every flag of one subcommand so the config file can fill the
/// same variables. File values apply only where the flag was not given on
/// the command line; requiredness is checked after the merge so a value
/// may come from either source.
class FlagBinder {
 public:
  void attach_config_flag(CLI::App& cmd) {
    cmd.add_option("--config", config_path_,
                   "flat key=value config file; flags override it");
  }

  void bind_double(CLI::App& cmd, const std::string& flag, double& ref,
                   const std::string& help, bool required) {
    add(cmd, flag, ref, help, required, [&ref](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') return false;
      ref = v;
      return true;
    });
  }

  void bind_uint64(CLI::App& cmd, const std::string& flag, std::uint64_t& ref,
                   const std::string& help) {
    add(cmd, flag, ref, help, false, [&ref](const std::string& s) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
      if (end == s.c_str() || *end != '\0') return false;
      ref = v;
      return true;
    });
  }

  void bind_unsigned(CLI::App& cmd, const std::string& flag, unsigned& ref,
                     const std::string& help) {
    add(cmd, flag, ref, help, false, [&ref](const std::string& s) {
      char* end = nullptr;
      const unsigned long v = std::strtoul(s.c_str(), &end, 10);
      if (end == s.c_str() || *end != '\0' || v > 0xffffffffUL) return false;
      ref = static_cast<unsigned>(v);
      return true;
    });
  }

  void bind_string(CLI::App& cmd, const std::string& flag, std::string& ref,
                   const std::string& help, bool required = false,
                   std::vector<std::string> choices = {}) {
    CLI::Option* opt = cmd.add_option(flag, ref, help);
    if (required) {
      opt->description(help + " [required]");
    } else {
      opt->capture_default_str();
    }
    if (!choices.empty()) opt->check(CLI::IsMember(choices));
    entries_[key_of(flag)] = {opt, required,
                              [&ref, choices](const std::string& s) {
                                if (!choices.empty() &&
                                    std::find(choices.begin(), choices.end(), s) ==
                                        choices.end()) {
                                  return false;
                                }
                                ref = s;
                                return true;
                              }};
  }

  void bind_flag(CLI::App& cmd, const std::string& flag, bool& ref,
                 const std::string& help) {
    CLI::Option* opt = cmd.add_flag(flag, ref, help);
    entries_[key_of(flag)] = {opt, false, [&ref](const std::string& s) {
                                if (s == "true" || s == "1" || s == "yes") {
                                  ref = true;
                                } else if (s == "false" || s == "0" || s == "no") {
                                  ref = false;
                                } else {
                                  return false;
                                }
                                return true;
                              }};
  }

  /// Reads the config file (if any), fills unset flags, then enforces
  /// required flags. Throws on unknown keys, unparsable values or missing
  /// required values.
  void finalize() {
    if (!config_path_.empty()) {
      std::ifstream is(config_path_);
      if (!is) {
        eztree::raise(eztree::errc::io_failure,
                      "cannot open config file '" + config_path_ + "'");
      }
      std::string line;
      int line_no = 0;
      while (std::getline(is, line)) {
        ++line_no;
        const std::string text = strip_comment_and_space(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
          bad_input("config line " + std::to_string(line_no) + " is not key=value");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
          bad_input("unknown config key '" + key + "' (line " +
                    std::to_string(line_no) + ")");
        }
        if (it->second.option->count() > 0) continue;  // flag wins
        if (!it->second.assign(value)) {
          bad_input("cannot parse config value '" + value + "' for key '" + key + "'");
        }
        it->second.from_file = true;
      }
    }
    for (const auto& [key, entry] : entries_) {
      if (entry.required && entry.option->count() == 0 && !entry.from_file) {
        bad_input("--" + key + " is required (flag or config file)");
      }
    }
  }

 private:
  struct Entry {
    CLI::Option* option;
    bool required;
    std::function<bool(const std::string&)> assign;
    bool from_file{false};
  };

  template <typename T, typename Assign>
  void add(CLI::App& cmd, const std::string& flag, T& ref, const std::string& help,
           bool required, Assign assign) {
    CLI::Option* opt = cmd.add_option(flag, ref, help);
    if (required) {
      opt->description(help + " [required]");
    } else {
      opt->capture_default_str();
    }
    entries_[key_of(flag)] = {opt, required, assign};
  }

  static std::string key_of(const std::string& flag) {
    return flag.substr(flag.find_first_not_of('-'));
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static std::string strip_comment_and_space(const std::string& line) {
    const auto hash = line.find('#');
    return trim(hash == std::string::npos ? line : line.substr(0, hash));
  }

  std::map<std::string, Entry> entries_;
  std::string config_path_;
};

struct EconomyFlags {
  double delta{0.0};
  double gamma{0.0};
  double psi{0.0};
  double mu{0.0};
  double sigma{0.0};

  eztree::Preferences preferences() const { return {delta, gamma, psi}; }
  eztree::Endowment endowment() const { return {mu, sigma}; }
};

void add_economy_options(CLI::App& cmd, FlagBinder& bind, EconomyFlags& e) {
  bind.bind_double(cmd, "--delta", e.delta,
                   "time discount rate (beta = exp(-delta))", true);
  bind.bind_double(cmd, "--gamma", e.gamma, "relative risk aversion (>= 0)", true);
  bind.bind_double(cmd, "--psi", e.psi,
                   "elasticity of intertemporal substitution (> 0)", true);
  bind.bind_double(cmd, "--mu", e.mu, "mean log dividend growth", true);
  bind.bind_double(cmd, "--sigma", e.sigma,
                   "std dev of log dividend growth (>= 0)", true);
}

struct CommonFlags {
  std::string format{"csv"};
  std::string output;
  std::string manifest{"manifest.json"};
};

void add_common_options(CLI::App& cmd, FlagBinder& bind, CommonFlags& c) {
  bind.bind_string(cmd, "--format", c.format, "output format", false, {"csv", "json"});
  bind.bind_string(cmd, "--output", c.output, "write results here instead of stdout");
  bind.bind_string(cmd, "--manifest", c.manifest, "path of the run manifest");
  bind.attach_config_flag(cmd);
}

/// Results sink: stdout by default, a file when --output is given.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) {
        eztree::raise(eztree::errc::io_failure, "cannot open output file '" + path + "'");
      }
      os_ = &file_;
    }
  }

  std::ostream& stream() { return *os_; }

  void finish() {
    os_->flush();
    if (!*os_) eztree::raise(eztree::errc::io_failure, "write to output failed");
  }

 private:
  std::ofstream file_;
  std::ostream* os_ = &std::cout;
};

void warn_if_negative_delta(double delta) {
  if (delta < 0.0) {
    std::cerr << "warning: delta = " << fmt17(delta)
              << " < 0 means beta = exp(-delta) > 1; accepted because the "
                 "existence margin still decides feasibility\n";
  }
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

void put_common_config(eztree::RunManifest& m, const CommonFlags& c) {
  m.config["format"] = c.format;
  m.config["output"] = c.output;
  m.config["manifest"] = c.manifest;
}

void put_economy_config(eztree::RunManifest& m, const EconomyFlags& e) {
  m.config["delta"] = fmt17(e.delta);
  m.config["gamma"] = fmt17(e.gamma);
  m.config["psi"] = fmt17(e.psi);
  m.config["mu"] = fmt17(e.mu);
  m.config["sigma"] = fmt17(e.sigma);
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  EconomyFlags econ;
  CommonFlags common;
  bool net_rates{false};
};

int run_solve(const SolveArgs& a) {
  warn_if_negative_delta(a.econ.delta);
  const eztree::Economy econ = eztree::validate(a.econ.preferences(), a.econ.endowment());
  const eztree::EquilibriumSolution sol = eztree::solve(econ);

  OutputTarget out(a.common.output);
  if (a.common.format == "csv") {
    out.stream() << "a_factor,pd_ratio,ln_rf,premium,e_ln_r,ln_e_r";
    if (a.net_rates) out.stream() << ",net_rf,net_e_r";
    out.stream() << '\n'
                 << fmt17(sol.a_factor) << ',' << fmt17(sol.pd_ratio) << ','
                 << fmt17(sol.ln_rf) << ',' << fmt17(sol.premium) << ','
                 << fmt17(sol.e_ln_r) << ',' << fmt17(sol.ln_e_r);
    if (a.net_rates) {
      out.stream() << ',' << fmt17(std::expm1(sol.ln_rf)) << ','
                   << fmt17(std::expm1(sol.ln_e_r));
    }
    out.stream() << '\n';
  } else {
    nlohmann::json j{{"a_factor", sol.a_factor}, {"pd_ratio", sol.pd_ratio},
                     {"ln_rf", sol.ln_rf},       {"premium", sol.premium},
                     {"e_ln_r", sol.e_ln_r},     {"ln_e_r", sol.ln_e_r}};
    if (a.net_rates) {
      j["net_rf"] = std::expm1(sol.ln_rf);
      j["net_e_r"] = std::expm1(sol.ln_e_r);
    }
    out.stream() << j.dump(2) << '\n';
  }
  out.finish();

  eztree::RunManifest m;
  m.command = "solve";
  put_economy_config(m, a.econ);
  put_common_config(m, a.common);
  m.config["net-rates"] = bool_str(a.net_rates);
  eztree::write_manifest(m, a.common.manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  EconomyFlags econ;
  CommonFlags common;
  std::uint64_t seed{0};
  std::uint64_t draws{1000000};
  unsigned threads{1};
  bool antithetic{false};
};

int run_verify(const VerifyArgs& a) {
  warn_if_negative_delta(a.econ.delta);
  const eztree::Economy econ = eztree::validate(a.econ.preferences(), a.econ.endowment());
  const eztree::EstimateOptions opts{a.threads, a.antithetic};
  const eztree::McEstimate equity =
      eztree::euler_residual_equity(econ, a.draws, a.seed, opts);
  const eztree::McEstimate riskfree =
      eztree::euler_residual_riskfree(econ, a.draws, a.seed, opts);

  struct Line {
    const char* name;
    const eztree::McEstimate* est;
  };
  const Line lines[] = {{"equity_euler", &equity}, {"riskfree_euler", &riskfree}};

  bool all_pass = true;
  OutputTarget out(a.common.output);
  nlohmann::json checks_json = nlohmann::json::array();
  if (a.common.format == "csv") {
    out.stream() << "check,residual,std_error,n_draws,seed,verdict\n";
  }
  for (const Line& line : lines) {
    const bool pass = eztree::passes_euler_check(*line.est);
    all_pass = all_pass && pass;
    if (a.common.format == "csv") {
      out.stream() << line.name << ',' << fmt17(line.est->mean) << ','
                   << fmt17(line.est->std_error) << ',' << line.est->n_draws << ','
                   << line.est->seed << ',' << (pass ? "PASS" : "FAIL") << '\n';
    } else {
      checks_json.push_back({{"check", line.name},
                             {"residual", line.est->mean},
                             {"std_error", line.est->std_error},
                             {"n_draws", line.est->n_draws},
                             {"seed", line.est->seed},
                             {"verdict", pass ? "PASS" : "FAIL"}});
    }
  }
  if (a.common.format == "json") {
    out.stream() << nlohmann::json{{"checks", checks_json}}.dump(2) << '\n';
  }
  out.finish();

  eztree::RunManifest m;
  m.command = "verify";
  m.seed = a.seed;
  put_economy_config(m, a.econ);
  put_common_config(m, a.common);
  m.config["seed"] = std::to_string(a.seed);
  m.config["draws"] = std::to_string(a.draws);
  m.config["threads"] = std::to_string(a.threads);
  m.config["antithetic"] = bool_str(a.antithetic);
  for (const Line& line : lines) {
    m.checks.emplace_back(line.name,
                          eztree::passes_euler_check(*line.est) ? "PASS" : "FAIL");
  }
  eztree::write_manifest(m, a.common.manifest);
  return all_pass ? 0 : 3;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string gamma, psi, delta, mu, sigma;
  CommonFlags common;
};

int run_sweep(const SweepArgs& a) {
  eztree::GridSpec grid;
  grid.gamma = eztree::parse_axis(a.gamma);
  grid.psi = eztree::parse_axis(a.psi);
  grid.delta = eztree::parse_axis(a.delta);
  grid.mu = eztree::parse_axis(a.mu);
  grid.sigma = eztree::parse_axis(a.sigma);
  for (double d : grid.delta) {
    if (d < 0.0) {
      warn_if_negative_delta(d);
      break;
    }
  }

  const std::vector<eztree::SweepRow> rows = eztree::sweep(grid);
  std::size_t feasible = 0;
  for (const auto& r : rows) feasible += r.feasible ? 1 : 0;
  std::cerr << "sweep: " << rows.size() << " cells, " << feasible << " feasible\n";

  OutputTarget out(a.common.output);
  if (a.common.format == "csv") {
    eztree::emit_csv(rows, out.stream());
  } else {
    eztree::emit_jsonl(rows, out.stream());
  }
  out.finish();

  eztree::RunManifest m;
  m.command = "sweep";
  m.config["gamma"] = a.gamma;
  m.config["psi"] = a.psi;
  m.config["delta"] = a.delta;
  m.config["mu"] = a.mu;
  m.config["sigma"] = a.sigma;
  put_common_config(m, a.common);
  eztree::write_manifest(m, a.common.manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// panic

struct PanicArgs {
  double delta{0.0}, psi{0.0}, mu{0.0}, sigma{0.0};
  double gamma_from{0.0}, gamma_to{0.0};
  CommonFlags common;
};

const char* panic_verdict(eztree::PanicRegime regime) {
  switch (regime) {
    case eztree::PanicRegime::price_falls_in_panic:
      return "price falls in a panic: the equity-premium rise outweighs the "
             "precautionary risk-free decline (EIS > 1)";
    case eztree::PanicRegime::price_rises_in_panic:
      return "price rises in a panic: the precautionary risk-free decline "
             "outweighs the equity-premium rise (EIS < 1)";
    case eztree::PanicRegime::price_insensitive:
      return "price is insensitive to risk aversion (unit EIS or zero "
             "growth volatility)";
  }
  return "?";
}

int run_panic(const PanicArgs& a) {
  warn_if_negative_delta(a.delta);
  const eztree::Economy base =
      eztree::validate({a.delta, a.gamma_from, a.psi}, {a.mu, a.sigma});
  const eztree::ScenarioResult res =
      eztree::panic_episode(base, a.gamma_from, a.gamma_to);
  const char* verdict = panic_verdict(res.regime);

  OutputTarget out(a.common.output);
  if (a.common.format == "csv") {
    out.stream() << "gamma_from,gamma_to,pd_before,pd_after,price_change_pct,regime\n"
                 << fmt17(a.gamma_from) << ',' << fmt17(a.gamma_to) << ','
                 << fmt17(res.c_before) << ',' << fmt17(res.c_after) << ','
                 << fmt17(res.price_change_pct) << ',' << to_string(res.regime) << '\n';
    std::cerr << "verdict: " << verdict << " [price change "
              << fmt17(100.0 * res.price_change_pct) << "%]\n";
  } else {
    nlohmann::json j{{"gamma_from", a.gamma_from},
                     {"gamma_to", a.gamma_to},
                     {"pd_before", res.c_before},
                     {"pd_after", res.c_after},
                     {"price_change_pct", res.price_change_pct},
                     {"regime", to_string(res.regime)},
                     {"verdict", verdict}};
    out.stream() << j.dump(2) << '\n';
  }
  out.finish();

  eztree::RunManifest m;
  m.command = "panic";
  m.config["delta"] = fmt17(a.delta);
  m.config["psi"] = fmt17(a.psi);
  m.config["mu"] = fmt17(a.mu);
  m.config["sigma"] = fmt17(a.sigma);
  m.config["gamma-from"] = fmt17(a.gamma_from);
  m.config["gamma-to"] = fmt17(a.gamma_to);
  put_common_config(m, a.common);
  m.checks.emplace_back("panic_regime", to_string(res.regime));
  eztree::write_manifest(m, a.common.manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  EconomyFlags econ;
  CommonFlags common;
  std::uint64_t seed{0};
  std::uint64_t periods{10000};
  double q0{1.0};
  std::string path_csv;
};

int run_simulate(const SimulateArgs& a) {
  warn_if_negative_delta(a.econ.delta);
  const eztree::Economy econ = eztree::validate(a.econ.preferences(), a.econ.endowment());
  const eztree::Path path =
      eztree::simulate_path(econ, static_cast<std::size_t>(a.periods), a.q0, a.seed);
  const eztree::MomentSummary mom = eztree::estimate_moments(path);
  const eztree::EquilibriumSolution sol = eztree::solve(econ);
  const double var = econ.endowment().variance();

  if (!a.path_csv.empty()) {
    std::ofstream pf(a.path_csv);
    if (!pf) {
      eztree::raise(eztree::errc::io_failure,
                    "cannot open path file '" + a.path_csv + "'");
    }
    pf << "t,q,p,lnR\n";
    for (std::size_t t = 0; t <= path.periods(); ++t) {
      pf << t << ',' << fmt17(path.dividend(t)) << ',' << fmt17(path.price(t)) << ',';
      if (t > 0) pf << fmt17(std::log(path.gross_returns()[t - 1]));
      pf << '\n';
    }
    pf.flush();
    if (!pf) {
      eztree::raise(eztree::errc::io_failure, "write failed for '" + a.path_csv + "'");
    }
  }

  struct Band {
    const char* metric;
    double estimate;
    double se;
    double target;
  };
  const Band bands[] = {
      {"mean_ln_r", mom.mean_ln_r, mom.se_mean_ln_r, sol.e_ln_r},
      {"var_ln_r", mom.var_ln_r, mom.se_var_ln_r, var},
      {"mean_ln_y", mom.mean_ln_y, mom.se_mean_ln_y, econ.endowment().mu},
      {"var_ln_y", mom.var_ln_y, mom.se_var_ln_y, var},
  };

  bool all_pass = true;
  OutputTarget out(a.common.output);
  nlohmann::json checks_json = nlohmann::json::array();
  if (a.common.format == "csv") {
    out.stream() << "metric,estimate,std_error,target,within_band\n";
  }
  eztree::RunManifest m;
  for (const Band& b : bands) {
    const bool pass =
        std::abs(b.estimate - b.target) <= 3.0 * b.se + eztree::kMcRoundingFloor;
    all_pass = all_pass && pass;
    if (a.common.format == "csv") {
      out.stream() << b.metric << ',' << fmt17(b.estimate) << ',' << fmt17(b.se) << ','
                   << fmt17(b.target) << ',' << bool_str(pass) << '\n';
    } else {
      checks_json.push_back({{"metric", b.metric},
                             {"estimate", b.estimate},
                             {"std_error", b.se},
                             {"target", b.target},
                             {"within_band", pass}});
    }
    m.checks.emplace_back(b.metric, pass ? "PASS" : "FAIL");
  }
  if (a.common.format == "json") {
    out.stream() << nlohmann::json{{"moments", checks_json}}.dump(2) << '\n';
  }
  out.finish();

  m.command = "simulate";
  m.seed = a.seed;
  put_economy_config(m, a.econ);
  put_common_config(m, a.common);
  m.config["seed"] = std::to_string(a.seed);
  m.config["periods"] = std::to_string(a.periods);
  m.config["q0"] = fmt17(a.q0);
  m.config["path-csv"] = a.path_csv;
  eztree::write_manifest(m, a.common.manifest);
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-form Lucas-tree equilibrium under recursive utility: "
               "solver, Monte Carlo verifier, grid sweeps, risk-aversion "
               "scenarios and path simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", eztree::kVersion);

  SolveArgs solve_args;
  FlagBinder solve_bind;
  CLI::App* solve_cmd = app.add_subcommand("solve", "print the closed-form equilibrium");
  add_economy_options(*solve_cmd, solve_bind, solve_args.econ);
  add_common_options(*solve_cmd, solve_bind, solve_args.common);
  solve_bind.bind_flag(*solve_cmd, "--net-rates", solve_args.net_rates,
                       "also print net simple rates expm1(ln_rf), expm1(ln_e_r)");

  VerifyArgs verify_args;
  FlagBinder verify_bind;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Monte Carlo check that both Euler residuals are zero");
  add_economy_options(*verify_cmd, verify_bind, verify_args.econ);
  add_common_options(*verify_cmd, verify_bind, verify_args.common);
  verify_bind.bind_uint64(*verify_cmd, "--seed", verify_args.seed, "RNG stream seed");
  verify_bind.bind_uint64(*verify_cmd, "--draws", verify_args.draws,
                          "Monte Carlo sample size");
  verify_bind.bind_unsigned(*verify_cmd, "--threads", verify_args.threads,
                            "worker threads (result is independent of this)");
  verify_bind.bind_flag(*verify_cmd, "--antithetic", verify_args.antithetic,
                        "average antithetic pairs (+z,-z) for variance reduction");

  SweepArgs sweep_args;
  FlagBinder sweep_bind;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "tabulate the equilibrium over a parameter grid");
  sweep_bind.bind_string(*sweep_cmd, "--gamma", sweep_args.gamma,
                         "axis: lo:hi:n, v1,v2,... or value", true);
  sweep_bind.bind_string(*sweep_cmd, "--psi", sweep_args.psi,
                         "axis: lo:hi:n, v1,v2,... or value", true);
  sweep_bind.bind_string(*sweep_cmd, "--delta", sweep_args.delta,
                         "axis: lo:hi:n, v1,v2,... or value", true);
  sweep_bind.bind_string(*sweep_cmd, "--mu", sweep_args.mu,
                         "axis: lo:hi:n, v1,v2,... or value", true);
  sweep_bind.bind_string(*sweep_cmd, "--sigma", sweep_args.sigma,
                         "axis: lo:hi:n, v1,v2,... or value", true);
  add_common_options(*sweep_cmd, sweep_bind, sweep_args.common);

  PanicArgs panic_args;
  FlagBinder panic_bind;
  CLI::App* panic_cmd = app.add_subcommand(
      "panic", "reprice the tree under a permanent risk-aversion shift");
  panic_bind.bind_double(*panic_cmd, "--delta", panic_args.delta,
                         "time discount rate", true);
  panic_bind.bind_double(*panic_cmd, "--psi", panic_args.psi,
                         "elasticity of intertemporal substitution", true);
  panic_bind.bind_double(*panic_cmd, "--mu", panic_args.mu,
                         "mean log dividend growth", true);
  panic_bind.bind_double(*panic_cmd, "--sigma", panic_args.sigma,
                         "std dev of log dividend growth", true);
  panic_bind.bind_double(*panic_cmd, "--gamma-from", panic_args.gamma_from,
                         "risk aversion before", true);
  panic_bind.bind_double(*panic_cmd, "--gamma-to", panic_args.gamma_to,
                         "risk aversion after", true);
  add_common_options(*panic_cmd, panic_bind, panic_args.common);

  SimulateArgs sim_args;
  FlagBinder sim_bind;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "simulate a dividend/price path and compare sample moments");
  add_economy_options(*sim_cmd, sim_bind, sim_args.econ);
  add_common_options(*sim_cmd, sim_bind, sim_args.common);
  sim_bind.bind_uint64(*sim_cmd, "--seed", sim_args.seed, "RNG stream seed");
  sim_bind.bind_uint64(*sim_cmd, "--periods", sim_args.periods,
                       "number of simulated transitions");
  sim_bind.bind_double(*sim_cmd, "--q0", sim_args.q0, "initial dividend level", false);
  sim_bind.bind_string(*sim_cmd, "--path-csv", sim_args.path_csv,
                       "also write the full path as CSV (t,q,p,lnR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (solve_cmd->parsed()) {
      solve_bind.finalize();
      return run_solve(solve_args);
    }
    if (verify_cmd->parsed()) {
      verify_bind.finalize();
      return run_verify(verify_args);
    }
    if (sweep_cmd->parsed()) {
      sweep_bind.finalize();
      return run_sweep(sweep_args);
    }
    if (panic_cmd->parsed()) {
      panic_bind.finalize();
      return run_panic(panic_args);
    }
    if (sim_cmd->parsed()) {
      sim_bind.finalize();
      return run_simulate(sim_args);
    }
  } catch (const eztree::model_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == eztree::errc::unit_psi ? 4 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
