// Copyright 2026 The decompint Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "decompint/checks.hpp"
#include "decompint/problem.hpp"
#include "decompint/runner.hpp"

namespace {

void add_solver_flags(CLI::App* cmd, decompint::RunFlags* flags) {
  cmd->add_option("--mode", flags->mode, "override the file's mode");
  cmd->add_option("--grid-step", flags->grid_step, "lattice step for grid-backed solvers");
  cmd->add_option("--max-parts", flags->max_parts, "cap on decomposition length");
  cmd->add_option("--node-budget", flags->node_budget,
                  "node budget for branch-and-bound and brute search");
  cmd->add_option("--seed", flags->seed, "seed for randomized suites");
  cmd->add_option("--size", flags->size, "instance count for randomized suites");
  cmd->add_option("--tolerance", flags->tolerance, "violation threshold for randomized suites");
}

int emit(const decompint::RunOutcome& out, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << out.document;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + out_path + "'");
    f << out.document;
  }
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decomposition-integral workbench"};
  app.require_subcommand(1);

  std::string file = "-";
  std::string out_path;
  std::string suite;
  std::vector<double> query;
  decompint::RunFlags flags;

  CLI::App* run = app.add_subcommand("run", "solve the queries of a problem file");
  run->add_option("file", file, "problem file path, or - for stdin");
  run->add_option("-o,--output", out_path, "write the result document here instead of stdout");
  add_solver_flags(run, &flags);

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force both integrals for every query");
  oracle->add_option("file", file, "problem file path, or - for stdin");
  oracle->add_option("-o,--output", out_path, "write the result document here instead of stdout");
  add_solver_flags(oracle, &flags);

  CLI::App* check = app.add_subcommand("check", "run a randomized property suite");
  check->add_option("suite", suite, "one of: monotonicity, dominance, "
                                    "comonotone-superadditivity, disjoint-superadditivity, "
                                    "oracle-equivalence, frank")
      ->required();
  check->add_option("--seed", flags.seed, "suite seed");
  check->add_option("--size", flags.size, "instance count override");
  check->add_option("--tolerance", flags.tolerance, "violation threshold override");

  CLI::App* explain = app.add_subcommand("explain", "print one query's witness decomposition");
  explain->add_option("file", file, "problem file path, or - for stdin")->required();
  explain->add_option("query", query, "query coordinates (defaults to the file's queries)");
  add_solver_flags(explain, &flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return emit(decompint::run_problem(decompint::load_problem(file), flags), out_path);
    if (oracle->parsed()) {
      flags.mode = "oracle";
      return emit(decompint::run_problem(decompint::load_problem(file), flags), out_path);
    }
    if (check->parsed()) {
      const decompint::SuiteReport r =
          decompint::run_suite(suite, flags.seed, flags.size, flags.tolerance);
      std::cout << r.suite << ": " << r.passed << "/" << r.total
                << " passed, max residual " << r.max_residual << "\n";
      if (!r.first_counterexample.empty())
        std::cout << "first counterexample: " << r.first_counterexample << "\n";
      return r.ok() ? 0 : 2;
    }
    // explain
    const decompint::ProblemFile p = decompint::load_problem(file);
    std::vector<decompint::NNVector> queries;
    if (!query.empty()) {
      queries.push_back(decompint::NNVector(query.begin(), query.end()));
    } else {
      queries = p.queries;
    }
    for (const decompint::NNVector& x : queries) std::cout << decompint::explain_query(p, x, flags);
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
