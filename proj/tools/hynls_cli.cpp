#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hynls/errors.hpp"
#include "hynls/experiments.hpp"
#include "hynls/frozen_constants.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 3;

struct ScenarioFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f) {
  cmd->add_option("--config", f.config, "scenario file")->required();
  cmd->add_option("--out", f.out, "output directory (overrides output.dir)");
  cmd->add_option("--seed", f.seed, "seed override");
}

hynls::ScenarioConfig resolve(const ScenarioFlags& f) {
  auto c = hynls::load_scenario(f.config);
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.seed) c.seed = *f.seed;
  return c;
}

void report(const hynls::RunManifest& m, const std::filesystem::path& dir, bool quiet) {
  if (quiet) return;
  std::cout << m.command << ": " << m.status << " (manifest " << (dir / "manifest.json").string() << ")\n";
  std::cout << m.summary.dump(2) << "\n";
  for (const auto& w : m.warnings) std::cout << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver and property checks for NLS with periodic plus localized data"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "print nothing on success");

  ScenarioFlags sim, ghost, conv, pic;
  auto* c_sim = app.add_subcommand("simulate", "run one scenario and write diagnostics");
  add_scenario_flags(c_sim, sim);
  auto* c_ghost = app.add_subcommand("ghost-pulse", "regrowth of a removed tooth");
  add_scenario_flags(c_ghost, ghost);
  auto* c_conv = app.add_subcommand("convergence", "dt-halving and grid-doubling study");
  add_scenario_flags(c_conv, conv);
  auto* c_pic = app.add_subcommand("picard", "Duhamel fixed-point iterations and contraction ratios");
  add_scenario_flags(c_pic, pic);

  hynls::SuiteConfig suite;
  std::string verify_out = "runs/verify";
  auto* c_ver = app.add_subcommand("verify", "run the property suite");
  c_ver->add_option("--out", verify_out, "output directory");
  c_ver->add_option("--seed", suite.seed, "corpus seed");
  c_ver->add_option("--only", suite.only, "run only the named checks");
  c_ver->add_option("--corpus-size", suite.corpus_size, "samples per randomized check")->check(CLI::PositiveNumber);
  c_ver->add_option("--exp-cases", suite.exp_bound_cases, "scenarios in the exponential-bound corpus")
      ->check(CLI::PositiveNumber);
  c_ver->add_option("--horizon", suite.horizon, "solver horizon, at most 1");
  c_ver->add_option("--tolerance-scale", suite.tolerance_scale, "multiplies declared tolerances")
      ->check(CLI::NonNegativeNumber);
  bool list_checks = false;
  c_ver->add_flag("--list", list_checks, "print the check names and exit");

  int fit_size = 1000;
  std::uint64_t fit_seed = 1;
  auto* c_fit = app.add_subcommand("fit-constants", "refit the frozen inequality constants");
  c_fit->add_option("--corpus-size", fit_size, "samples")->check(CLI::PositiveNumber);
  c_fit->add_option("--seed", fit_seed, "fitting seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*c_ver) {
      if (list_checks) {
        for (const auto& n : hynls::suite_check_names()) std::cout << n << "\n";
        return kExitOk;
      }
      const auto m = hynls::run_verify(suite, verify_out);
      if (!quiet) {
        for (auto& [name, passed] : m.summary["checks"].items()) {
          std::cout << (passed.get<bool>() ? "PASS " : "FAIL ") << name << "\n";
        }
      }
      report(m, verify_out, quiet);
      return m.exit_code;
    }
    if (*c_fit) {
      for (double a : {1.5, 2.0, 3.0}) {
        std::printf("gn alpha=%g fitted=%.17g frozen=%.17g\n", a, hynls::fit_gn_constant(fit_size, a, fit_seed),
                    hynls::frozen::gn_constant(a));
      }
      for (double s : {0.0, 1.0}) {
        std::printf("bilinear s=%g fitted=%.17g frozen=%.17g\n", s,
                    hynls::fit_bilinear_constant(fit_size, s, fit_seed), hynls::frozen::bilinear_constant(s));
      }
      return kExitOk;
    }
    const ScenarioFlags& f = *c_sim ? sim : *c_ghost ? ghost : *c_conv ? conv : pic;
    const auto config = resolve(f);
    hynls::RunManifest m;
    if (*c_sim) m = hynls::run_simulate(config);
    if (*c_ghost) m = hynls::run_ghost_pulse(config);
    if (*c_conv) m = hynls::run_convergence(config);
    if (*c_pic) m = hynls::run_picard(config);
    report(m, config.output_dir, quiet);
    return m.exit_code;
  } catch (const hynls::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}
