// Command-line front end: scenario runs, parameter sweeps, invariant suites,
// preset catalog.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "crossdiff/runner.hpp"
#include "crossdiff/verify.hpp"

namespace {

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw crossdiff::ConfigError("bad value: " + tok);
    if (!std::isfinite(v)) throw crossdiff::ConfigError("non-finite value");
    out.push_back(v);
  }
  if (out.empty()) throw crossdiff::ConfigError("empty value list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crossdiff: cross-diffusion system simulator and invariant lab"};
  app.require_subcommand(1);

  std::string config, out_dir, param, values_csv, suite;

  auto* sim = app.add_subcommand("simulate", "run one scenario");
  sim->add_option("--config", config, "preset name or JSON config path")
      ->required();
  sim->add_option("--out", out_dir, "output directory")->required();

  auto* sw = app.add_subcommand("sweep", "run a parameter sweep");
  sw->add_option("--config", config, "preset name or JSON config path")
      ->required();
  sw->add_option("--param", param, "dotted parameter path, e.g. model.eps0")
      ->required();
  sw->add_option("--values", values_csv, "comma-separated values")->required();
  sw->add_option("--out", out_dir, "output directory")->required();

  auto* ver = app.add_subcommand("verify", "run an invariant suite");
  ver->add_option("suite", suite,
                  "operators|reduction|positivity|ladder|sobolev|all")
      ->required();

  auto* pre = app.add_subcommand("presets", "preset catalog");
  pre->add_subcommand("list", "list available presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help/version requests exit 0; genuine usage errors exit 2
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      const crossdiff::Scenario sc = crossdiff::load_scenario(config);
      const crossdiff::RunArtifacts art = crossdiff::run_scenario(sc, out_dir);
      std::cout << "outcome: " << crossdiff::outcome_name(art.outcome);
      if (art.outcome != crossdiff::Outcome::Completed)
        std::cout << " at t* = " << art.t_fail;
      std::cout << "\nsup-norm: " << art.sup_norm
                << "\nmin: " << art.min_value << "\n";
      return art.exit_code;
    }
    if (sw->parsed()) {
      crossdiff::json base;
      crossdiff::load_scenario(config, &base);
      const auto values = parse_values(values_csv);
      const auto rows = crossdiff::sweep(base, param, values, out_dir);
      for (const auto& r : rows)
        std::cout << param << " = " << r.value << " -> "
                  << crossdiff::outcome_name(r.outcome)
                  << (r.outcome == crossdiff::Outcome::Completed
                          ? ""
                          : " t* = " + std::to_string(r.t_star))
                  << "\n";
      return 0;  // per-run failures live in the rows
    }
    if (ver->parsed()) {
      const auto checks = crossdiff::verify_suite(suite);
      bool all = true;
      for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.name << " ("
                  << c.detail << ")\n";
        all = all && c.pass;
      }
      return all ? 0 : 1;
    }
    if (pre->parsed()) {
      for (const auto& n : crossdiff::preset_names()) std::cout << n << "\n";
      return 0;
    }
  } catch (const crossdiff::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
