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

#ifndef DECOMPINT_DECOMP_HPP
#define DECOMPINT_DECOMP_HPP

#include <map>
#include <string>
#include <vector>

#include "decompint/lp.hpp"
#include "decompint/system.hpp"
#include "decompint/types.hpp"
#include "decompint/weighting.hpp"

namespace decompint {

enum class IntegralStatus {
  Exact,             // value is the integral, witness attached
  Approximate,       // grid-limited bound; error_bound estimates the gap
  Unbounded,         // refined decompositions exceed the divergence cutoff
  InfeasibleDomain,  // no admissible collection covers the query (super)
};

/// One decomposition member: `coeff` copies of `vector` for unit/integer
/// systems, or the vector scaled by `coeff` for real-coefficient systems.
struct WitnessPart {
  NNVector vector;
  double coeff = 0.0;
};

struct IntegralResult {
  IntegralStatus status = IntegralStatus::Exact;
  double value = 0.0;
  double error_bound = 0.0;  // Approximate only: estimated gap to the true value
  std::vector<WitnessPart> witness;
};

struct SolverOptions {
  double grid_step = 1.0 / 64;      // lattice step for grid-refined routes
  int max_parts = 0;                // decomposition length cap; 0 = unlimited
  long long node_budget = 1000000;  // branch-and-bound budget
  double divergence_factor = 1e6;   // unbounded when bounds exceed factor * A-scale
  bool use_fast_paths = true;       // closed-form shortcuts for capacity bases
  long long enumeration_limit = 10000000;
};

/// Sub-decomposition integral: sup of sum_j A(y_j) over admissible
/// collections with sum_j y_j <= x (sup over the empty set is 0).
IntegralResult sub_integral(const Base& b, const NNVector& x, const SolverOptions& opts = {});

/// Super-decomposition integral: inf of sum_j A(y_j) over admissible
/// collections with sum_j y_j >= x.
IntegralResult super_integral(const Base& b, const NNVector& x, const SolverOptions& opts = {});

enum class Integrability { Yes, No, Unknown };

struct IntegrabilityReport {
  Integrability verdict = Integrability::Unknown;
  std::string reason;
  double witness_value = 0.0;          // No: value of the diverging decomposition
  std::vector<WitnessPart> witness;    // No: the diverging decomposition itself
  double best_lower_bound = 0.0;       // Unknown: strongest finite bound seen
};

/// Decides whether x admits a finite sub-decomposition integral.  Finite
/// generator pools are always Yes; full-orthant bases run the dominance and
/// small-scale ratio certificates, then search for a diverging sequence of
/// uniform/axis splits.
IntegrabilityReport is_sub_integrable(const Base& b, const NNVector& x,
                                      const SolverOptions& opts = {});

/// Lower approximation of the superadditive transform
///   A*(x) = sup { sum A(y_j) : sum y_j <= x }
/// by the best decomposition into at most `parts` grid-aligned pieces
/// (parts <= 0 or large: unlimited, which the lattice renders finite).
/// Monotone nondecreasing in `parts` and under step refinement.  Returns
/// Unbounded when the divergence search trips the cutoff.
IntegralResult superadditive_transform(const Weighting& w, const NNVector& x, int parts,
                                       double step, const SolverOptions& opts = {});

/// Upper approximation of the subadditive transform
///   A~(x) = inf { sum A(y_j) : sum y_j >= x },  nonincreasing in refinement.
IntegralResult subadditive_transform(const Weighting& w, const NNVector& x, int parts,
                                     double step, const SolverOptions& opts = {});

/// Batched transforms: one lattice sized by the componentwise maximum of the
/// queries is filled once and then read out per query.  Much cheaper than
/// repeated single-query calls on fine grids.
std::vector<IntegralResult> superadditive_transform_many(const Weighting& w,
                                                         const std::vector<NNVector>& xs,
                                                         double step,
                                                         const SolverOptions& opts = {});
std::vector<IntegralResult> subadditive_transform_many(const Weighting& w,
                                                       const std::vector<NNVector>& xs,
                                                       double step,
                                                       const SolverOptions& opts = {});

/// Integral over all pairwise-comonotone decompositions: grid optimum over
/// each descending-cone chain (capacity weightings reduce to exact chains).
IntegralResult comonotone_integral(const Weighting& w, const NNVector& x, double step,
                                   const SolverOptions& opts = {});

/// Batched comonotone integrals: shares one lattice per ordering cone across
/// all queries instead of refilling it per point.
std::vector<IntegralResult> comonotone_integral_many(const Weighting& w,
                                                     const std::vector<NNVector>& xs,
                                                     double step,
                                                     const SolverOptions& opts = {});

/// Integral over collections of at most k members with pairwise disjoint
/// supports; exact via a subset partition program (no grid needed).
IntegralResult disjoint_support_integral(const Weighting& w, const NNVector& x, int k,
                                         bool super = false);

/// Integral over decompositions of length at most k; k = 1 returns A(x)
/// exactly, larger k uses a k-round grid program.
IntegralResult fixed_length_integral(const Weighting& w, const NNVector& x, int k, double step,
                                     bool super = false);

/// Max-pseudo-addition integral: sup over admissible collections of the
/// *largest* member weight, which the best feasible single member attains.
/// Partition constraints are not supported here (singletons rarely cover x).
IntegralResult max_pseudo_integral(const Base& b, const NNVector& x,
                                   const SolverOptions& opts = {});

/// 0/1 subset-sum: best total of `weights` not exceeding `capacity`.
IntegralResult knapsack_integral(const std::vector<double>& weights, double capacity,
                                 const LPOptions& opts = {});

struct IteratedResult {
  IntegralResult result;
  std::map<NNVector, double> induced;  // g -> sub_integral(b, g)
};

/// Replaces the weighting by g -> sub_integral(b, g) on the generator pool
/// and integrates again over the same system.  Throws std::domain_error when
/// the induced weighting vanishes identically.
IteratedResult iterated_sub_integral(const Base& b, const NNVector& x,
                                     const SolverOptions& opts = {});

struct FrankReport {
  struct Row {
    NNVector point;
    double super_value = 0.0;
    double sub_value = 0.0;
    double residual = 0.0;  // super + sub - (x + y)
  };
  std::vector<Row> rows;
  double max_abs_residual = 0.0;
};

/// Pairs a conorm-like weighting (super-integrated) with a norm-like one
/// (sub-integrated) over the unit-box grid and reports the residual of
/// super + sub = x + y at the sample points.
FrankReport frank_check(const Weighting& conorm, const Weighting& norm,
                        const std::vector<NNVector>& samples, double step);

/// Re-evaluates a witness against the base: feasibility (<= x for sub,
/// >= x for super), the structural constraint, and value agreement within
/// kWitnessTol.  Exact results must pass this.
bool verify_witness(const Base& b, const NNVector& x, const IntegralResult& r, bool super);

}  // namespace decompint

#endif  // DECOMPINT_DECOMP_HPP
