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

#include "decompint/types.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace decompint {

Capacity::Capacity(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  if (n < 1 || n > 20) throw std::invalid_argument("capacity: ground size must be in [1, 20]");
  if (values_.size() != (std::size_t(1) << n))
    throw std::invalid_argument("capacity: expected 2^n values");
}

Capacity Capacity::additive(int n, const std::vector<double>& weights) {
  if (int(weights.size()) != n) throw std::invalid_argument("capacity: need n weights");
  std::vector<double> v(std::size_t(1) << n, 0.0);
  for (SubsetMask e = 1; e < v.size(); ++e) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      if (e & (SubsetMask(1) << i)) s += weights[i];
    v[e] = s;
  }
  return Capacity(n, std::move(v));
}

Capacity Capacity::with_value(SubsetMask e, double v) const {
  std::vector<double> values = values_;
  values.at(e) = v;
  return Capacity(n_, std::move(values));
}

ValidationReport validate_capacity(const Capacity& m) {
  const int n = m.ground_size();
  const SubsetMask full = m.full_mask();
  for (SubsetMask e = 0; e <= full; ++e) {
    if (std::isnan(m.at(e)))
      return {ValidationReport::Kind::Structural, "value of " + format_mask(e) + " is NaN"};
  }
  if (std::fabs(m.at(0)) > kEps)
    return {ValidationReport::Kind::Boundary, "empty set must map to 0"};
  if (m.at(full) <= 0.0)
    return {ValidationReport::Kind::Boundary, "full set must have positive measure"};
  for (SubsetMask e = 0; e <= full; ++e) {
    for (int i = 0; i < n; ++i) {
      const SubsetMask bit = SubsetMask(1) << i;
      if (e & bit) continue;
      const SubsetMask f = e | bit;
      if (m.at(f) < m.at(e) - kEps) {
        return {ValidationReport::Kind::Monotonicity,
                "m(" + format_mask(f) + ") < m(" + format_mask(e) + ")"};
      }
    }
  }
  return {};
}

ValidationReport validate_capacity(int n, const std::map<SubsetMask, double>& entries) {
  if (n < 1 || n > 20)
    return {ValidationReport::Kind::Structural, "ground size must be in [1, 20]"};
  const SubsetMask full = (SubsetMask(1) << n) - 1;
  for (SubsetMask e = 0; e <= full; ++e) {
    if (!entries.count(e))
      return {ValidationReport::Kind::Structural, "missing entry for " + format_mask(e)};
  }
  std::vector<double> v(std::size_t(1) << n);
  for (const auto& [e, val] : entries) {
    if (e > full)
      return {ValidationReport::Kind::Structural, "entry outside ground set: " + format_mask(e)};
    v[e] = val;
  }
  return validate_capacity(Capacity(n, std::move(v)));
}

Capacity capacity_from_map(int n, const std::map<SubsetMask, double>& entries) {
  const SubsetMask full = (SubsetMask(1) << n) - 1;
  std::vector<double> v(std::size_t(1) << n);
  for (SubsetMask e = 0; e <= full; ++e) {
    auto it = entries.find(e);
    if (it == entries.end())
      throw std::invalid_argument("capacity: missing entry for " + format_mask(e));
    v[e] = it->second;
  }
  return Capacity(n, std::move(v));
}

bool leq(const NNVector& x, const NNVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("leq: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > y[i] + kEps) return false;
  return true;
}

bool comonotone(const NNVector& x, const NNVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("comonotone: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if ((x[i] - x[j]) * (y[i] - y[j]) < -kEps) return false;
  return true;
}

NNVector indicator(int n, SubsetMask e, double c) {
  NNVector v(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (e & (SubsetMask(1) << i)) v[i] = c;
  return v;
}

SubsetMask support_mask(const NNVector& x) {
  SubsetMask e = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > kEps) e |= SubsetMask(1) << i;
  return e;
}

bool as_scaled_indicator(const NNVector& x, SubsetMask* e, double* c) {
  SubsetMask supp = support_mask(x);
  if (supp == 0) return false;
  double level = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(supp & (SubsetMask(1) << i))) continue;
    if (level == 0.0) {
      level = x[i];
    } else if (std::fabs(x[i] - level) > kEps) {
      return false;
    }
  }
  if (e) *e = supp;
  if (c) *c = level;
  return true;
}

std::vector<int> mask_to_indices(SubsetMask e) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (e & (SubsetMask(1) << i)) out.push_back(i + 1);
  return out;
}

SubsetMask mask_from_indices(int n, const std::vector<int>& indices) {
  SubsetMask e = 0;
  for (int idx : indices) {
    if (idx < 1 || idx > n) throw std::invalid_argument("subset index out of range");
    e |= SubsetMask(1) << (idx - 1);
  }
  return e;
}

std::string format_vector(const NNVector& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ")";
  return os.str();
}

std::string format_mask(SubsetMask e) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int idx : mask_to_indices(e)) {
    if (!first) os << ", ";
    os << idx;
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace decompint
