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

#include "decompint/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace decompint {
namespace {

std::optional<double> eval_table(const TableWeighting& t, const NNVector& x) {
  auto it = t.values.find(x);
  if (it != t.values.end()) return it->second;
  if (!t.homogeneous) return std::nullopt;
  // Look for a table key g with x = c*g, c > 0.
  for (const auto& [g, v] : t.values) {
    if (g.size() != x.size()) continue;
    double c = 0.0;
    bool match = true;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] > kEps) {
        double ratio = x[i] / g[i];
        if (c == 0.0) {
          c = ratio;
        } else if (std::fabs(ratio - c) > kEps * std::max(1.0, ratio)) {
          match = false;
          break;
        }
      } else if (x[i] > kEps) {
        match = false;
        break;
      }
    }
    if (match && c > 0.0) return c * v;
  }
  if (support_mask(x) == 0) return 0.0;  // limit of c*A(g) as c -> 0
  return std::nullopt;
}

std::optional<double> eval_closed(const ClosedFormWeighting& f, const NNVector& x) {
  switch (f.kind) {
    case ClosedFormKind::WeightedSum: {
      if (f.weights.size() != x.size()) return std::nullopt;
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += f.weights[i] * x[i];
      return s;
    }
    case ClosedFormKind::MaxCoord: {
      if (x.empty()) return std::nullopt;
      return f.scale * *std::max_element(x.begin(), x.end());
    }
    case ClosedFormKind::ProbabilisticSum: {
      double p = 1.0;
      for (double xi : x) {
        if (xi < -kEps || xi > 1.0 + kEps) return std::nullopt;
        p *= 1.0 - std::clamp(xi, 0.0, 1.0);
      }
      return 1.0 - p;
    }
    case ClosedFormKind::Product: {
      double p = 1.0;
      for (double xi : x) p *= xi;
      return p;
    }
    case ClosedFormKind::MaxLog: {
      if (x.empty()) return std::nullopt;
      double m = 0.0;
      for (double xi : x) m = std::max(m, std::log1p(xi));
      return m;
    }
    case ClosedFormKind::XPlusSqrtY: {
      if (x.size() != 2) return std::nullopt;
      return x[0] + std::sqrt(x[1]);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> evaluate(const Weighting& w, const NNVector& x) {
  if (const auto* t = std::get_if<TableWeighting>(&w)) return eval_table(*t, x);
  if (const auto* c = std::get_if<CapacityWeighting>(&w)) {
    if (int(x.size()) != c->capacity.ground_size()) return std::nullopt;
    if (support_mask(x) == 0) return 0.0;
    SubsetMask e;
    double level;
    if (!as_scaled_indicator(x, &e, &level)) return std::nullopt;
    return level * c->capacity.at(e);
  }
  if (const auto* c = std::get_if<CapacityMinWeighting>(&w)) {
    if (int(x.size()) != c->capacity.ground_size()) return std::nullopt;
    if (support_mask(x) == 0) return 0.0;
    SubsetMask e;
    double level;
    if (!as_scaled_indicator(x, &e, &level)) return std::nullopt;
    return std::min(level, c->capacity.at(e));
  }
  return eval_closed(std::get<ClosedFormWeighting>(w), x);
}

bool is_homogeneous(const Weighting& w) {
  if (const auto* t = std::get_if<TableWeighting>(&w)) return t->homogeneous;
  if (std::holds_alternative<CapacityWeighting>(w)) return true;
  if (std::holds_alternative<CapacityMinWeighting>(w)) return false;
  const auto& f = std::get<ClosedFormWeighting>(w);
  return f.kind == ClosedFormKind::WeightedSum || f.kind == ClosedFormKind::MaxCoord;
}

ValidationReport validate_weighting(const Weighting& w, const std::vector<NNVector>& domain) {
  if (domain.empty())
    return {ValidationReport::Kind::Structural, "empty domain sample"};
  std::vector<double> vals(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    auto v = evaluate(w, domain[i]);
    if (!v)
      return {ValidationReport::Kind::Structural,
              "no value at " + format_vector(domain[i])};
    vals[i] = *v;
  }
  bool some_positive = false;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (vals[i] > kEps) some_positive = true;
    if (support_mask(domain[i]) == 0 && std::fabs(vals[i]) > kEps)
      return {ValidationReport::Kind::Boundary, "A(0) must be 0"};
    for (std::size_t j = 0; j < domain.size(); ++j) {
      if (i == j) continue;
      if (leq(domain[i], domain[j]) && vals[i] > vals[j] + kEps)
        return {ValidationReport::Kind::Monotonicity,
                "A" + format_vector(domain[i]) + " > A" + format_vector(domain[j])};
    }
  }
  if (!some_positive)
    return {ValidationReport::Kind::Boundary, "weighting vanishes on the whole sample"};
  return {};
}

double weighting_scale(const Weighting& w, int n) {
  if (const auto* t = std::get_if<TableWeighting>(&w)) {
    double m = 0.0;
    for (const auto& [g, v] : t->values) m = std::max(m, std::fabs(v));
    return m > 0.0 ? m : 1.0;
  }
  if (const auto* c = std::get_if<CapacityWeighting>(&w))
    return std::max(c->capacity.at(c->capacity.full_mask()), 1e-12);
  if (const auto* c = std::get_if<CapacityMinWeighting>(&w))
    return std::max(c->capacity.at(c->capacity.full_mask()), 1e-12);
  auto v = evaluate(w, NNVector(n, 1.0));
  return v && *v > 0.0 ? *v : 1.0;
}

}  // namespace decompint
