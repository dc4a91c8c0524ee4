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

#ifndef DECOMPINT_LP_HPP
#define DECOMPINT_LP_HPP

#include <vector>

#include "decompint/types.hpp"

namespace decompint {

enum class ConstraintSense { LessEq, GreaterEq, Equal };

/// Dense linear program over nonnegative variables:
///   opt c^T x  s.t.  rows[i] . x  (sense[i])  rhs[i],  x >= 0.
/// `integer[j]` marks variables that must take integral values (empty means
/// all continuous).
struct LinearProgram {
  bool maximize = true;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<ConstraintSense> senses;
  std::vector<double> rhs;
  std::vector<bool> integer;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }

  void add_row(std::vector<double> coeffs, ConstraintSense sense, double b) {
    rows.push_back(std::move(coeffs));
    senses.push_back(sense);
    rhs.push_back(b);
  }
};

enum class LPStatus { Optimal, Unbounded, Infeasible, BudgetExceeded };

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  double value = 0.0;
  std::vector<double> x;
  long long nodes = 0;  // relaxations solved (branch and bound only)
};

struct LPOptions {
  double eps = 1e-9;
  double int_tol = kIntTol;
  long long node_budget = 1000000;
};

/// Two-phase primal simplex with Bland's anti-cycling rule.  Integrality
/// marks are ignored (this is the relaxation solver).
LPSolution simplex_solve(const LinearProgram& lp, const LPOptions& opts = {});

/// Depth-first branch and bound on the marked integer variables, branching
/// on the most fractional one.  Returns BudgetExceeded (with the incumbent,
/// if any) once `node_budget` relaxations have been solved.
LPSolution bnb_solve(const LinearProgram& lp, const LPOptions& opts = {});

/// Relaxation bound for pruning: the LP optimum ignoring integrality.
LPSolution dual_bound(const LinearProgram& lp, const LPOptions& opts = {});

}  // namespace decompint

#endif  // DECOMPINT_LP_HPP
