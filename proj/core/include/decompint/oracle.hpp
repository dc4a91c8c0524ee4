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

#ifndef DECOMPINT_ORACLE_HPP
#define DECOMPINT_ORACLE_HPP

#include <stdexcept>
#include <vector>

#include "decompint/decomp.hpp"
#include "decompint/system.hpp"
#include "decompint/types.hpp"

namespace decompint {

/// Thrown when a brute-force search space exceeds OracleOptions::space_limit
/// (or an instance has no finite member lattice at all).  Refusals are
/// deterministic: the same instance always refuses at the same point.
class OracleRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  long long space_limit = 10000000;  // search nodes examined before refusing
  double coeff_step = 0.25;          // lattice spacing for real coefficients
};

/// Reference answer produced by exhaustive enumeration.  `collection` uses
/// the same convention as IntegralResult witnesses: `coeff` copies of
/// `vector` for unit/integer systems, the member `coeff * vector` for real
/// systems.  `nodes` reports how much of the space was examined.
struct OracleResult {
  bool feasible = true;  // covers only: false when nothing reaches x
  double value = 0.0;
  std::vector<WitnessPart> collection;
  long long nodes = 0;
};

/// Literal sup of sum_j A(y_j) over every admissible collection with
/// sum_j y_j <= x, found by a depth-first odometer over member
/// multiplicities with caps read off the remaining budget.  Real
/// coefficients are restricted to the coeff_step lattice and require a
/// homogeneous weighting (anything else has no finite member family).
OracleResult brute_sub(const Base& b, const NNVector& x, const OracleOptions& opts = {});

/// Literal inf of sum_j A(y_j) over collections with sum_j y_j >= x; caps
/// come from single-member covers of the residual demand.  Branches that
/// provably cannot beat the best cover found so far are skipped, which
/// keeps the enumeration exact while making overdemanded instances
/// tractable.  `feasible` is false when no admissible collection covers x.
OracleResult brute_super(const Base& b, const NNVector& x, const OracleOptions& opts = {});

/// Exact max over all set partitions {B_1..B_k} of {1..n} of
/// sum_k m(B_k) * min_{i in B_k} x_i, enumerated as restricted growth
/// strings.  Refuses n > 10 (Bell numbers outgrow the node budget).
double brute_partitions(const Capacity& m, const NNVector& x);

}  // namespace decompint

#endif  // DECOMPINT_ORACLE_HPP
