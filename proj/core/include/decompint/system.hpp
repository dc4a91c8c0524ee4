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

#ifndef DECOMPINT_SYSTEM_HPP
#define DECOMPINT_SYSTEM_HPP

#include <variant>
#include <vector>

#include "decompint/types.hpp"
#include "decompint/weighting.hpp"

namespace decompint {

/// Decomposition collections are drawn from one of these generator pools.

/// A finite list of nonzero vectors; collections are finite multisets of
/// (possibly scaled) generators.
struct ExplicitGenerators {
  std::vector<NNVector> vectors;
};

/// All scaled indicators c * 1_E over nonempty E.
struct IndicatorGenerators {};

/// Grid points of the box [0, upper]^n with the given step.
struct BoxGridGenerators {
  NNVector upper;
  double step = 1.0 / 64;
};

/// The whole nonnegative orthant; used by the transform-style integrals
/// that optimize over arbitrary grid-refined decompositions.
struct FullOrthant {};

/// An explicit, closed list of admissible collections (no recombination).
struct FixedCollections {
  std::vector<std::vector<NNVector>> collections;
};

using GeneratorSet = std::variant<ExplicitGenerators, IndicatorGenerators, BoxGridGenerators,
                                  FullOrthant, FixedCollections>;

/// Admissible coefficients attached to generators when forming collections.
enum class CoeffDomain {
  NonNegReal,  // arbitrary c >= 0
  NonNegInt,   // integer multiplicities
  UnitCoeff,   // members used verbatim (repetition allowed)
};

/// Structural restriction on admissible collections.
struct CollectionConstraint {
  enum class Kind {
    Any,              // no restriction
    Chain,            // member supports form a nested chain (indicator systems)
    Partition,        // member supports partition the ground set
    DisjointSupport,  // at most k members, pairwise disjoint supports
    Comonotone,       // members pairwise comonotone
    MaxParts,         // at most k members
  };
  Kind kind = Kind::Any;
  int k = 0;  // DisjointSupport / MaxParts only

  static CollectionConstraint any() { return {}; }
  static CollectionConstraint chain() { return {Kind::Chain, 0}; }
  static CollectionConstraint partition() { return {Kind::Partition, 0}; }
  static CollectionConstraint disjoint_support(int k) { return {Kind::DisjointSupport, k}; }
  static CollectionConstraint comonotone() { return {Kind::Comonotone, 0}; }
  static CollectionConstraint max_parts(int k) { return {Kind::MaxParts, k}; }
};

/// A decomposition system: generator pool, coefficient domain, constraint.
struct DecompSystem {
  int n = 0;
  GeneratorSet generators;
  CoeffDomain coeff_domain = CoeffDomain::NonNegReal;
  CollectionConstraint constraint;
};

/// Decomposition system plus weighting function: everything an integral needs.
struct Base {
  DecompSystem system;
  Weighting weighting;
};

/// Structural checks: dimensions agree, explicit generators are nonzero and
/// nonnegative, capacity weightings only meet indicator-shaped generators,
/// the weighting covers the generator pool, constraint parameters make sense.
ValidationReport validate_base(const Base& b);

/// Explicit vector pool for Explicit/Indicator/BoxGrid systems (indicator
/// systems materialize all 2^n - 1 unscaled indicators; box grids enumerate
/// grid points, excluding the origin).  Throws for FullOrthant and
/// FixedCollections, and when the pool would exceed `limit` vectors.
std::vector<NNVector> materialize_generators(const DecompSystem& sys, std::size_t limit = 2000000);

/// Does the multiset of members satisfy the constraint?  Membership in the
/// generator pool is not re-checked here.
bool collection_satisfies(const CollectionConstraint& c, const std::vector<NNVector>& members);

}  // namespace decompint

#endif  // DECOMPINT_SYSTEM_HPP
