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

#ifndef DECOMPINT_TYPES_HPP
#define DECOMPINT_TYPES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace decompint {

/// Nonnegative vector over the ground set {1..n}, stored 0-indexed.
using NNVector = std::vector<double>;

/// Subset of {1..n} as a bitmask; bit i-1 set means element i is present.
/// Ground sets are capped at n = 20, so 32 bits are plenty.
using SubsetMask = std::uint32_t;

/// Comparison tolerance used for equality throughout the library.
inline constexpr double kEps = 1e-9;
/// Tolerance for witness re-evaluation checks.
inline constexpr double kWitnessTol = 1e-7;
/// Integrality tolerance for integer programs.
inline constexpr double kIntTol = 1e-6;

/// Outcome of a structural validation pass.  `kind` distinguishes missing
/// data (Structural) from boundary-condition failures (Boundary) and order
/// violations (Monotonicity); `detail` identifies the first offender.
struct ValidationReport {
  enum class Kind { Ok, Structural, Boundary, Monotonicity };
  Kind kind = Kind::Ok;
  std::string detail;

  bool ok() const { return kind == Kind::Ok; }
};

/// Monotone measure on 2^{1..n} with m(empty)=0, stored densely: value of
/// subset E lives at index mask(E).  Immutable after construction.
class Capacity {
 public:
  /// `values` must have size 1<<n; values[0] is m(empty).  Throws
  /// std::invalid_argument on a size mismatch or n outside [1,20].
  Capacity(int n, std::vector<double> values);

  /// Additive measure from per-element weights (size n).
  static Capacity additive(int n, const std::vector<double>& weights);

  int ground_size() const { return n_; }
  SubsetMask full_mask() const { return (SubsetMask(1) << n_) - 1; }
  double at(SubsetMask e) const { return values_[e]; }
  const std::vector<double>& values() const { return values_; }

  /// Copy with one entry replaced (used to probe validation).
  Capacity with_value(SubsetMask e, double v) const;

 private:
  int n_;
  std::vector<double> values_;
};

/// Checks the monotone-measure axioms: m(empty)=0, m(full)>0, and
/// monotonicity along every (E, E+{i}) edge (which implies the general
/// comparable-pair condition).  NaN entries count as structural errors.
ValidationReport validate_capacity(const Capacity& m);

/// Sparse variant: every subset of {1..n} must be present.  A missing entry
/// is a Structural error; otherwise the dense checks apply.
ValidationReport validate_capacity(int n, const std::map<SubsetMask, double>& entries);

/// Builds a dense capacity from complete sparse entries.  Throws
/// std::invalid_argument when entries are missing.
Capacity capacity_from_map(int n, const std::map<SubsetMask, double>& entries);

/// Componentwise x <= y with kEps slack.
bool leq(const NNVector& x, const NNVector& y);

/// True when (x_i - x_j) * (y_i - y_j) >= -kEps for every pair i < j.
bool comonotone(const NNVector& x, const NNVector& y);

/// Indicator vector of the subset `e` in ambient dimension n, scaled by c.
NNVector indicator(int n, SubsetMask e, double c = 1.0);

/// Mask of coordinates where x is strictly positive (beyond kEps).
SubsetMask support_mask(const NNVector& x);

/// If x == c * 1_E for some c > 0 and nonempty E, returns true and fills
/// (e, c); zero vectors and non-flat vectors return false.
bool as_scaled_indicator(const NNVector& x, SubsetMask* e, double* c);

/// 1-based sorted element list of a mask, e.g. 0b101 -> {1, 3}.
std::vector<int> mask_to_indices(SubsetMask e);
SubsetMask mask_from_indices(int n, const std::vector<int>& indices);

/// Renders vectors/subsets for diagnostics: "(2, 1)" and "{1, 3}".
std::string format_vector(const NNVector& x);
std::string format_mask(SubsetMask e);

}  // namespace decompint

#endif  // DECOMPINT_TYPES_HPP
