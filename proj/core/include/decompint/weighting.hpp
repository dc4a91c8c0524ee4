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

#ifndef DECOMPINT_WEIGHTING_HPP
#define DECOMPINT_WEIGHTING_HPP

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "decompint/types.hpp"

namespace decompint {

/// Finite table of vector -> weight entries.  With `homogeneous` set the
/// table is extended positively homogeneously: A(c*g) = c*A(g) for c > 0.
struct TableWeighting {
  std::map<NNVector, double> values;
  bool homogeneous = false;
};

/// A(c * 1_E) = c * m(E); defined only on scaled indicator vectors.
struct CapacityWeighting {
  Capacity capacity;
};

/// A(c * 1_E) = min(c, m(E)); the clipped form used for max-aggregation
/// integrals on any totally ordered scale.
struct CapacityMinWeighting {
  Capacity capacity;
};

enum class ClosedFormKind {
  WeightedSum,       // sum_i w_i x_i
  MaxCoord,          // scale * max_i x_i
  ProbabilisticSum,  // 1 - prod_i (1 - x_i), on [0,1]^n
  Product,           // prod_i x_i
  MaxLog,            // max_i ln(1 + x_i)
  XPlusSqrtY,        // x + sqrt(y), two coordinates
};

struct ClosedFormWeighting {
  ClosedFormKind kind;
  std::vector<double> weights;  // WeightedSum only
  double scale = 1.0;           // MaxCoord only
};

using Weighting =
    std::variant<TableWeighting, CapacityWeighting, CapacityMinWeighting, ClosedFormWeighting>;

/// Value of the weighting at x, or nullopt when x lies outside its domain
/// (missing table entry, non-indicator argument for capacity forms, box
/// violation for the probabilistic sum, wrong arity).
std::optional<double> evaluate(const Weighting& w, const NNVector& x);

/// True when A(c*x) = c*A(x) holds for all c > 0 on the whole domain, which
/// is what lets a coefficient become a linear-program variable.
bool is_homogeneous(const Weighting& w);

/// Checks the weighting axioms on the given domain sample: monotone on
/// comparable pairs, A(0) = 0 when 0 is sampled, and positive somewhere.
/// An empty sample or a sample point outside the domain is Structural.
ValidationReport validate_weighting(const Weighting& w, const std::vector<NNVector>& domain);

/// Characteristic magnitude of the weighting (max table value, m(full), or
/// the value at the all-ones vector); used to scale divergence cutoffs.
double weighting_scale(const Weighting& w, int n);

}  // namespace decompint

#endif  // DECOMPINT_WEIGHTING_HPP
