// decision-gate — plan, evaluate and verify multi-metric A/B-test decision rules.
//
//   decision-gate design   <config.json> [--format=table|json]
//   decision-gate evaluate <config.json> <results.json> [--format=table|json]
//   decision-gate simulate [--scenario=..] [--structure=..] [--correction=..] ...
//
// Exit codes: 0 ship/success, 1 no-ship, 2 input error, 3 infeasible design.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "decision_gate/commands.hpp"

namespace {

uint64_t default_seed() {
  // DECISION_GATE_SEED overrides the built-in default; --seed overrides both.
  if (const char* env = std::getenv("DECISION_GATE_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-metric A/B-test decision rules: design, evaluation, simulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string results_path;
  std::string format = "table";

  CLI::App* design = app.add_subcommand("design", "Compute per-test levels and sample size");
  design->add_option("config", config_path, "Experiment config file")->required();
  design->add_option("--format", format, "Output format: table|json")
      ->check(CLI::IsMember({"table", "json"}));

  CLI::App* evaluate = app.add_subcommand("evaluate", "Render a ship/no-ship decision");
  evaluate->add_option("config", config_path, "Experiment config file")->required();
  evaluate->add_option("results", results_path, "Observed results file")->required();
  evaluate->add_option("--format", format, "Output format: table|json")
      ->check(CLI::IsMember({"table", "json"}));

  dgate::SimulateArgs sim;
  sim.seed = default_seed();
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo rejection-rate study");
  simulate->add_option("--scenario", sim.scenario, "global_h0|status_quo|global_h1");
  simulate->add_option("--structure", sim.structure, "independent|dependent|block1|block2");
  simulate->add_option("--correction", sim.correction,
                       "none|only_alpha|prop33|prop41|prop41_improved|prop41_improved_remark");
  simulate->add_flag("--nyholt", sim.nyholt, "Apply the effective-number-of-tests adjustment");
  simulate->add_option("--reps", sim.replications, "Replications per cell");
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--looks", sim.looks, "Sequential analyses for deterioration/quality");
  simulate->add_option("--threads", sim.threads, "Simulation worker threads");
  simulate->add_option("--spending", sim.spending, "Alpha spending: linear|obf");
  simulate->add_option("--format", sim.format, "Output format: table|json")
      ->check(CLI::IsMember({"table", "json"}));
  simulate->add_option("--out", sim.out_path, "Write the report to a file instead of stdout");
  simulate->add_flag("--paper-tables", sim.paper_tables,
                     "Run the full scenario x structure x correction grid");
  simulate->add_option("--success", sim.success_count, "Success metric count");
  simulate->add_option("--guardrails", sim.guardrail_count, "Guardrail metric count");
  simulate->add_option("--deterioration", sim.deterioration_count,
                       "Extra deterioration metric count");
  simulate->add_option("--quality", sim.quality_count, "Quality test count");
  simulate->add_option("--alpha", sim.alpha, "Decision-level type I target");
  simulate->add_option("--alpha-minus", sim.alpha_minus, "Deterioration/quality budget");
  simulate->add_option("--beta", sim.beta, "Decision-level type II target");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : dgate::kExitInputError;
  }

  if (design->parsed()) return dgate::cmd_design(config_path, format, std::cout, std::cerr);
  if (evaluate->parsed()) {
    return dgate::cmd_evaluate(config_path, results_path, format, std::cout, std::cerr);
  }
  return dgate::cmd_simulate(sim, std::cout, std::cerr);
}
