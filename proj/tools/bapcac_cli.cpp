// Copyright 2026 The bapcac Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bapcac/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"bapcac: joint vehicle positioning and crew break scheduling"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;
  auto* gen = app.add_subcommand("generate", "Generate an instance from a generator spec");
  gen->add_option("spec", spec_path, "Generator spec JSON")->required();
  gen->add_option("-o,--out", out_path, "Instance file to write")->required();

  bapcac::SolveArgs solve;
  auto* sol = app.add_subcommand("solve", "Solve an instance");
  sol->add_option("instance", solve.instance_path, "Instance JSON")->required();
  sol->add_option("-o,--out", solve.out_path, "Solution file to write");
  sol->add_option("--solver", solve.solver, "exact | heuristic | auto | bruteforce")
      ->check(CLI::IsMember({"exact", "heuristic", "auto", "bruteforce"}));
  sol->add_option("--w", solve.weight, "Override the objective weight w in [0, 1]");
  sol->add_option("--time-limit", solve.time_limit, "Wall-clock limit in seconds");
  sol->add_option("--node-limit", solve.node_limit, "Branch-and-bound node limit");
  sol->add_option("--seed", solve.seed, "Heuristic seed");
  sol->add_option("--restarts", solve.restarts, "Heuristic restarts");
  sol->add_option("--iterations", solve.iterations, "Local-search move evaluations per restart");
  sol->add_flag("--single-thread", solve.single_thread, "Use one worker thread");

  std::string instance_path;
  std::string solution_path;
  auto* ver = app.add_subcommand("verify", "Check a solution file against an instance");
  ver->add_option("instance", instance_path, "Instance JSON")->required();
  ver->add_option("solution", solution_path, "Solution JSON")->required();

  bapcac::SweepArgs sweep;
  auto* swp = app.add_subcommand("sweep", "Solve for several weights and write CSV");
  swp->add_option("instance", sweep.instance_path, "Instance JSON")->required();
  swp->add_option("--w-values", sweep.w_values, "Weights, e.g. 0 0.5 1")->expected(1, -1);
  swp->add_option("-o,--out", sweep.out_path, "CSV file (default: stdout)");
  swp->add_option("--solver", sweep.solve.solver, "exact | heuristic | auto")
      ->check(CLI::IsMember({"exact", "heuristic", "auto"}));
  swp->add_option("--time-limit", sweep.solve.time_limit, "Per-point limit in seconds");
  swp->add_option("--seed", sweep.solve.seed, "Heuristic seed");
  swp->add_flag("--single-thread", sweep.solve.single_thread, "Solve points one at a time");

  std::string lp_instance;
  std::string lp_out;
  auto* lp = app.add_subcommand("export-lp", "Write the model in LP format");
  lp->add_option("instance", lp_instance, "Instance JSON")->required();
  lp->add_option("-o,--out", lp_out, "LP file to write")->required();

  std::string suite_dir;
  auto* suite = app.add_subcommand("suite", "Write the bundled oracle suite");
  suite->add_option("dir", suite_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : bapcac::kExitInputError;
  }

  try {
    if (*gen) return bapcac::cmd_generate(spec_path, out_path, std::cout, std::cerr);
    if (*sol) return bapcac::cmd_solve(solve, std::cout, std::cerr);
    if (*ver) return bapcac::cmd_verify(instance_path, solution_path, std::cout, std::cerr);
    if (*swp) return bapcac::cmd_sweep(sweep, std::cout, std::cerr);
    if (*lp) return bapcac::cmd_export_lp(lp_instance, lp_out, std::cout, std::cerr);
    if (*suite) return bapcac::cmd_suite(suite_dir, std::cout, std::cerr);
  } catch (const bapcac::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bapcac::kExitInputError;
  }
  return bapcac::kExitInputError;
}
