// Command-line driver: run, verify-lemmas, converge, steady.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nsfstab/harness.hpp"

namespace {

using namespace nsfstab;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config, "JSON config file, '-' for stdin");
  if (config_required) opt->required();
  sub->add_option("--out", c.out, "output directory (overrides output.dir)");
  sub->add_option("--seed", c.seed, "RNG seed (overrides the config)");
  sub->add_flag("--quiet", c.quiet, "only print the final status line");
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed) cfg.initial.seed = *c.seed;
  return cfg;
}

void print_report(const RunReport& rep, bool quiet) {
  if (!quiet) {
    for (const auto& c : rep.criteria) {
      std::printf("%-4s %-12s %-62s measured=%.6g tol=%.6g\n", c.passed ? "PASS" : "FAIL", c.id.c_str(),
                  c.name.c_str(), c.measured, c.tolerance);
    }
  }
  if (rep.error) {
    std::printf("%s: error (%s): %s\n", rep.command.c_str(), std::string(to_string(*rep.error_category)).c_str(),
                rep.error->c_str());
  } else {
    std::printf("%s: %s\n", rep.command.c_str(), rep.all_passed() ? "all criteria passed" : "criterion failure");
  }
}

void save_report(const RunReport& rep, const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream os(std::filesystem::path(dir) / name);
  os << rep.to_json() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Navier-Stokes-Fourier perturbation decay simulator and diagnostics"};
  app.require_subcommand(1);

  Common run_opts, lemma_opts, conv_opts, steady_opts;
  auto* run_cmd = app.add_subcommand("run", "integrate a scenario and evaluate the run criteria");
  add_common(run_cmd, run_opts, true);
  auto* lemma_cmd = app.add_subcommand("verify-lemmas", "scalar lemma suite");
  add_common(lemma_cmd, lemma_opts, false);
  int pairs = 50;
  lemma_cmd->add_option("--pairs", pairs, "random (m, n) pairs in the property sweep")->check(CLI::PositiveNumber);
  auto* conv_cmd = app.add_subcommand("converge", "dt and h refinement study of the identities");
  add_common(conv_cmd, conv_opts, true);
  int levels = 0;
  conv_cmd->add_option("--levels", levels, "refinement levels (>= 2, overrides the config)");
  auto* steady_cmd = app.add_subcommand("steady", "steady heat solve only");
  add_common(steady_cmd, steady_opts, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const RunConfig cfg = resolve(run_opts);
      ExperimentOptions eo;
      eo.log = run_opts.quiet ? nullptr : &std::cerr;
      const ExperimentResult res = run_experiment(cfg, eo);
      print_report(res.report, run_opts.quiet);
      return exit_code_for(res.report);
    }
    if (*lemma_cmd) {
      const std::uint64_t seed = lemma_opts.seed.value_or(1);
      const RunReport rep = verify_lemmas(seed, pairs);
      print_report(rep, lemma_opts.quiet);
      save_report(rep, lemma_opts.out.empty() ? "out" : lemma_opts.out, "lemmas.json");
      return exit_code_for(rep);
    }
    if (*conv_cmd) {
      RunConfig cfg = resolve(conv_opts);
      if (levels) cfg.convergence.levels = levels;
      const RunReport rep = convergence_study(cfg, conv_opts.quiet ? nullptr : &std::cerr);
      print_report(rep, conv_opts.quiet);
      save_report(rep, cfg.output_dir, "convergence.json");
      return exit_code_for(rep);
    }
    if (*steady_cmd) {
      const RunConfig cfg = resolve(steady_opts);
      const RunReport rep = steady_report(cfg);
      print_report(rep, steady_opts.quiet);
      save_report(rep, cfg.output_dir, "steady.json");
      return exit_code_for(rep);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", std::string(to_string(e.category())).c_str(), e.what());
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
