#include <iostream>

#include <CLI11.hpp>

#include "hxrl/commands.hpp"

int main(int argc, char** argv) {
  using namespace hxrl::cli;

  CLI::App app{"Hierarchical Q-learning with memory-based success-probability explanations"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train every task and write artifact.json + summary.txt");
  train_cmd->add_option("--config", train.config_path, "Experiment config (JSON)")->required();
  train_cmd->add_option("--seed", train.seed, "Override hyperparams.seed");
  train_cmd->add_option("--out", train.out_dir, "Output directory")->required();

  ExplainArgs explain;
  auto* explain_cmd = app.add_subcommand("explain", "Print a factual or contrastive explanation");
  explain_cmd->add_option("--artifact", explain.artifact_path, "Trained artifact")->required();
  explain_cmd->add_option("--scope", explain.scope, "task<N> or global")->required();
  explain_cmd->add_option("--state", explain.state, "State id")->required();
  explain_cmd->add_option("--action", explain.action, "Action taken: up|down|left|right")->required();
  explain_cmd->add_option("--versus", explain.versus, "Contrast action (why not this one?)");

  ExportArgs exp;
  auto* export_cmd = app.add_subcommand("export", "Write a success matrix as CSV, PPM (P5) or SVG");
  export_cmd->add_option("--artifact", exp.artifact_path, "Trained artifact")->required();
  export_cmd->add_option("--matrix", exp.matrix, "task<N> or global")->required();
  export_cmd->add_option("--format", exp.format, "csv|ppm|svg")->required();
  export_cmd->add_option("--out", exp.out_path, "Output file")->required();

  RolloutArgs rollout;
  auto* rollout_cmd = app.add_subcommand("rollout", "Greedy chained rollout through all tasks");
  rollout_cmd->add_option("--artifact", rollout.artifact_path, "Trained artifact")->required();
  rollout_cmd->add_option("--seed", rollout.seed, "Rollout seed");
  rollout_cmd->add_option("--max-steps", rollout.max_total_steps, "Total step cap")->capture_default_str();

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact success probabilities of a fixed policy (CSV)");
  oracle_cmd->add_option("--config", oracle.config_path, "Experiment config (JSON)")->required();
  oracle_cmd->add_option("--task", oracle.task_id, "Task id")->capture_default_str();
  oracle_cmd->add_option("--policy", oracle.policy, "uniform|greedy-from-artifact")->capture_default_str();
  oracle_cmd->add_option("--artifact", oracle.artifact_path, "Artifact providing the greedy policy");
  oracle_cmd->add_option("--horizon", oracle.horizon, "Step horizon (default: the task's max_steps)");
  oracle_cmd->add_option("--out", oracle.out_path, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*train_cmd) return cmd_train(train, std::cout, std::cerr);
  if (*explain_cmd) return cmd_explain(explain, std::cout, std::cerr);
  if (*export_cmd) return cmd_export(exp, std::cout, std::cerr);
  if (*rollout_cmd) return cmd_rollout(rollout, std::cout, std::cerr);
  if (*oracle_cmd) return cmd_oracle(oracle, std::cout, std::cerr);
  return kExitUsage;
}
