#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace risopt::cli;
  CLI::App app{"RIS hardware-imperfection compensation simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", run_opts.config_path, "scenario JSON")->required();
    cmd->add_option("--out", run_opts.out_path, "output CSV")->required();
    cmd->add_option("--seed", seed, "override the scenario seed");
    cmd->add_option("--trials", trials, "override the trial count");
    cmd->add_flag("--trace", run_opts.trace, "also write <out>_trace.csv");
    cmd->add_flag("--paper-scale", run_opts.full_scale, "K=700, L_a=101, L_b=51, L_d=100, 1000 trials");
  };

  auto* run = app.add_subcommand("run", "Monte Carlo run, one CSV row per (trial, label)");
  add_common(run);

  auto* sw = app.add_subcommand("sweep", "one scenario per axis value, aggregate rows");
  add_common(sw);
  std::string axis;
  std::vector<double> values;
  sw->add_option("--axis", axis, "numeric configuration key")->required();
  sw->add_option("--values", values, "comma-separated values")->required()->delimiter(',');

  auto* gc = app.add_subcommand("gradcheck", "analytic gradient vs central differences");
  std::size_t n = 8, k = 16;
  double tol = 1e-4;
  std::uint64_t gc_seed = 1;
  gc->add_option("--n", n, "reflectors");
  gc->add_option("--k", k, "subcarriers");
  gc->add_option("--tol", tol, "max relative error");
  gc->add_option("--seed", gc_seed, "instance seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  for (auto* cmd : {run, sw}) {
    if (!cmd->parsed()) continue;
    if (cmd->count("--seed") > 0) run_opts.seed = seed;
    if (cmd->count("--trials") > 0) run_opts.trials = trials;
  }
  if (run->parsed()) return cmd_run(run_opts);
  if (sw->parsed()) return cmd_sweep(run_opts, axis, values);
  return cmd_gradcheck(n, k, tol, gc_seed);
}
