// Command-line front end: solve | trace | score-trace | oracle.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "orienteer/commands.hpp"

namespace {

using orienteer::CommandOptions;

void add_common(CLI::App* cmd, CommandOptions& o, std::string& start, std::string& mode) {
  cmd->add_option("--start", start, "start point \"x,y\" in map units");
  cmd->add_option("--mode", mode, "race mode: cross, free or score")
      ->check(CLI::IsMember({"cross", "free", "score"}));
  cmd->add_option("--controls", o.controls, "number of sampled control directions");
  cmd->add_flag("--seedless", "accepted for scripting; runs are always deterministic");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid-control solver for orienteering races"};
  app.require_subcommand(1);

  CommandOptions o;
  std::string start, mode;

  auto* solve = app.add_subcommand("solve", "solve the race and dump the value function");
  solve->add_option("--map", o.map_path, "map file")->required();
  solve->add_option("--config", o.config_path, "key = value configuration file");
  solve->add_option("--out", o.out_dir, "output directory");
  add_common(solve, o, start, mode);

  auto* trace = app.add_subcommand("trace", "reconstruct the optimal race from a solve");
  trace->add_option("--out", o.out_dir, "directory written by solve")->required();
  add_common(trace, o, start, mode);

  auto* score = app.add_subcommand("score-trace", "reconstruct score races for one or more budgets");
  score->add_option("--out", o.out_dir, "directory written by solve --mode score")->required();
  score->add_option("--budget", o.budgets, "time budget T' (repeatable)");
  add_common(score, o, start, mode);

  auto* oracle = app.add_subcommand("oracle", "exhaustive grid-graph tours for comparison");
  oracle->add_option("--map", o.map_path, "map file")->required();
  oracle->add_option("--config", o.config_path, "key = value configuration file");
  oracle->add_option("--out", o.out_dir, "directory for tour.csv");
  add_common(oracle, o, start, mode);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!start.empty()) o.start = orienteer::parse_point(start);
    if (!mode.empty()) o.mode = orienteer::parse_run_mode(mode);
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return orienteer::exit_input_error;
  }

  if (solve->parsed()) return orienteer::cmd_solve(o, std::cout, std::cerr);
  if (trace->parsed()) return orienteer::cmd_trace(o, std::cout, std::cerr);
  if (score->parsed()) return orienteer::cmd_score_trace(o, std::cout, std::cerr);
  return orienteer::cmd_oracle(o, std::cout, std::cerr);
}
