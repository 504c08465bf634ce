#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "vortgrad/error.hpp"
#include "vortgrad/manifest.hpp"

namespace cli = vortgrad::cli;

int main(int argc, char** argv) {
  CLI::App app{"vorticity gradient growth experiments"};
  app.set_version_flag("--version", vortgrad::version());
  app.require_subcommand(1);
  app.fallthrough();

  cli::Options opts;
  app.add_option("--config", opts.config, "config file (sectioned key = value)");
  app.add_option("--out", opts.out,
                 std::string("output directory; default [output] dir, then $") + cli::kOutDirEnv +
                     ", then ./vortgrad-out");
  app.add_option("--threads", opts.threads, "concurrent sweep members")->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "seed for sampled model points and admissibility checks");

  auto* simulate = app.add_subcommand("simulate", "build initial data and run the Euler solver");
  auto* model = app.add_subcommand("model", "integrate the model ODE and its variational system");
  auto* sweep = app.add_subcommand("sweep", "run a family of members along one axis");
  auto* report = app.add_subcommand("report", "pass/fail table from one or more manifests");
  std::vector<std::filesystem::path> manifests;
  report->add_option("manifests", manifests, "manifest.txt files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kPass : cli::kUsage;
  }

  try {
    if (*simulate) return cli::cmd_simulate(opts);
    if (*model) return cli::cmd_model(opts);
    if (*sweep) return cli::cmd_sweep(opts);
    if (*report) return cli::cmd_report(manifests, opts.out);
  } catch (const vortgrad::BlowUp& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return cli::kBlowUp;
  } catch (const vortgrad::CflViolation& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return cli::kBlowUp;
  } catch (const vortgrad::ConstraintViolation& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  }
  return cli::kUsage;
}
