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

#ifndef DECOMPINT_CHECKS_HPP
#define DECOMPINT_CHECKS_HPP

#include <string>
#include <vector>

namespace decompint {

/// Outcome of one randomized property suite.
struct SuiteReport {
  std::string suite;
  int total = 0;
  int passed = 0;
  double max_residual = 0.0;          // worst violation (passing runs report slack)
  std::string first_counterexample;   // empty when all instances pass

  bool ok() const { return total > 0 && passed == total; }
};

/// Names accepted by run_suite, in canonical order.
std::vector<std::string> suite_names();

/// Runs one suite deterministically under the given seed.  `size` overrides
/// the per-suite instance count when positive; `tolerance` overrides the
/// suite's violation threshold when positive.  Throws std::runtime_error on
/// an unknown suite name.
///
/// Suites:
///   monotonicity                pointwise order of queries is preserved
///   dominance                   pointwise order of weightings is preserved
///   comonotone-superadditivity  comonotone pairs aggregate superadditively
///                               (and additively under the chain reduction)
///   disjoint-superadditivity    disjointly supported pairs aggregate
///                               superadditively
///   oracle-equivalence          generic solvers match brute-force search
///   frank                       conorm/norm residual stays within grid
///                               tolerance on the unit square
SuiteReport run_suite(const std::string& suite, unsigned seed, int size = 0,
                      double tolerance = 0.0);

}  // namespace decompint

#endif  // DECOMPINT_CHECKS_HPP
