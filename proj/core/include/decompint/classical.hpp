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

#ifndef DECOMPINT_CLASSICAL_HPP
#define DECOMPINT_CLASSICAL_HPP

#include <utility>
#include <vector>

#include "decompint/lp.hpp"
#include "decompint/types.hpp"

namespace decompint {

/// Choquet integral via the sort formula:
///   sum_i (x_(i) - x_(i-1)) * m({j : x_j >= x_(i)}).
double choquet(const Capacity& m, const NNVector& x);

/// Shilkret integral: max over nonempty E of m(E) * min_{i in E} x_i.
double shilkret(const Capacity& m, const NNVector& x);

/// Sugeno integral: max over nonempty E of min(min_{i in E} x_i, m(E)).
double sugeno(const Capacity& m, const NNVector& x);

/// PAN integral: best value over partitions of the ground set, each block E
/// contributing m(E) * min_{i in E} x_i.  Subset dynamic program, O(3^n).
double pan(const Capacity& m, const NNVector& x);

/// Concave integral: LP  max sum_E a_E m(E)  s.t.  sum_{E owns i} a_E <= x_i,
/// a >= 0, over nonempty subsets E.
double concave(const Capacity& m, const NNVector& x, const LPOptions& opts = {});

/// Convex counterpart: min sum_E a_E m(E) s.t. sum_{E owns i} a_E >= x_i.
double convex(const Capacity& m, const NNVector& x, const LPOptions& opts = {});

/// Optimal chain decomposition behind the Choquet value: (set, coefficient)
/// pairs whose scaled indicators sum to x.
std::vector<std::pair<SubsetMask, double>> choquet_chain(const Capacity& m, const NNVector& x);

/// Optimal partition behind the PAN value: (block, coefficient) pairs.
std::vector<std::pair<SubsetMask, double>> pan_partition(const Capacity& m, const NNVector& x);

/// Piecewise-constant level-dependent capacity: slice j applies on the level
/// interval [t_{j-1}, t_j) with t_0 = 0 and breakpoints = {t_1, ..., t_m}.
/// With `final_unbounded` the last slice also covers [t_m, infinity).
struct LevelDependentCapacity {
  std::vector<double> breakpoints;
  std::vector<Capacity> slices;
  bool final_unbounded = true;
};

ValidationReport validate_level_capacity(const LevelDependentCapacity& lc);

/// Exact integral  int_0^max(x) nu_t({i : x_i >= t}) dt  computed by
/// refining the breakpoints with the distinct values of x.  Throws
/// std::domain_error when max(x) exceeds the covered range.
double level_dependent_choquet(const LevelDependentCapacity& lc, const NNVector& x);

}  // namespace decompint

#endif  // DECOMPINT_CLASSICAL_HPP
