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

#ifndef DECOMPINT_RUNNER_HPP
#define DECOMPINT_RUNNER_HPP

#include <string>

#include "decompint/problem.hpp"

namespace decompint {

/// Command-line-facing knobs.  Zero / empty means "use the solver default".
struct RunFlags {
  std::string mode;        // overrides the file's mode when nonempty
  double grid_step = 0.0;  // lattice step for grid-backed routes
  int max_parts = 0;       // decomposition length cap
  long long node_budget = 0;  // caps both branch-and-bound and brute search
  unsigned seed = 42;         // check suites
  int size = 0;               // check suites: instance count
  double tolerance = 0.0;     // check suites: violation threshold
};

/// A finished run: the result document (JSON tree, one record per query) and
/// the process exit code.  0 = every record Exact/Approximate (or the suite
/// passed), 2 = some record Unbounded/Infeasible/refused (or the suite
/// failed).  Input errors are thrown as std::runtime_error instead and map
/// to exit code 1 at the command line.
struct RunOutcome {
  std::string document;
  int exit_code = 0;
};

/// Dispatches the file's queries through the mode's solver: `sub`, `super`,
/// `maxpseudo`, `oracle` (brute force, both directions), `classical:<name>`
/// (choquet | shilkret | sugeno | pan | concave | convex | level), or
/// `check:<suite>`.
RunOutcome run_problem(const ProblemFile& p, const RunFlags& flags = {});

/// Human-readable account of one query: the optimal collection as
/// weighting-value lines, the total, and the constraint slack; non-exact
/// statuses print the status and bound instead.
std::string explain_query(const ProblemFile& p, const NNVector& query,
                          const RunFlags& flags = {});

}  // namespace decompint

#endif  // DECOMPINT_RUNNER_HPP
