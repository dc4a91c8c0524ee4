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

#include "decompint/system.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace decompint {
namespace {

ValidationReport check_vector(int n, const NNVector& g, bool allow_zero) {
  if (int(g.size()) != n)
    return {ValidationReport::Kind::Structural, "vector " + format_vector(g) + " has wrong arity"};
  for (double v : g) {
    if (std::isnan(v) || v < -kEps)
      return {ValidationReport::Kind::Structural,
              "vector " + format_vector(g) + " has a negative or NaN entry"};
  }
  if (!allow_zero && support_mask(g) == 0)
    return {ValidationReport::Kind::Structural, "zero vector is not a valid generator"};
  return {};
}

}  // namespace

ValidationReport validate_base(const Base& b) {
  const DecompSystem& sys = b.system;
  if (sys.n < 1 || sys.n > 20)
    return {ValidationReport::Kind::Structural, "ground size must be in [1, 20]"};

  const bool capacity_weighted = std::holds_alternative<CapacityWeighting>(b.weighting) ||
                                 std::holds_alternative<CapacityMinWeighting>(b.weighting);
  if (capacity_weighted) {
    const Capacity& m = std::holds_alternative<CapacityWeighting>(b.weighting)
                            ? std::get<CapacityWeighting>(b.weighting).capacity
                            : std::get<CapacityMinWeighting>(b.weighting).capacity;
    if (m.ground_size() != sys.n)
      return {ValidationReport::Kind::Structural, "capacity arity differs from system arity"};
  }

  if (const auto* eg = std::get_if<ExplicitGenerators>(&sys.generators)) {
    if (eg->vectors.empty())
      return {ValidationReport::Kind::Structural, "generator list is empty"};
    for (const NNVector& g : eg->vectors) {
      auto r = check_vector(sys.n, g, false);
      if (!r.ok()) return r;
      if (capacity_weighted && !as_scaled_indicator(g, nullptr, nullptr))
        return {ValidationReport::Kind::Structural,
                "capacity weighting requires indicator-shaped generators, got " + format_vector(g)};
      if (!evaluate(b.weighting, g))
        return {ValidationReport::Kind::Structural,
                "weighting undefined at generator " + format_vector(g)};
    }
  } else if (const auto* bg = std::get_if<BoxGridGenerators>(&sys.generators)) {
    auto r = check_vector(sys.n, bg->upper, true);
    if (!r.ok()) return r;
    if (bg->step <= 0)
      return {ValidationReport::Kind::Structural, "grid step must be positive"};
  } else if (const auto* fc = std::get_if<FixedCollections>(&sys.generators)) {
    if (fc->collections.empty())
      return {ValidationReport::Kind::Structural, "no collections given"};
    for (const auto& coll : fc->collections) {
      if (coll.empty())
        return {ValidationReport::Kind::Structural, "empty collection in system"};
      for (const NNVector& g : coll) {
        auto r = check_vector(sys.n, g, false);
        if (!r.ok()) return r;
        if (!evaluate(b.weighting, g))
          return {ValidationReport::Kind::Structural,
                  "weighting undefined at member " + format_vector(g)};
      }
    }
  }

  using K = CollectionConstraint::Kind;
  if ((sys.constraint.kind == K::DisjointSupport || sys.constraint.kind == K::MaxParts) &&
      sys.constraint.k < 1)
    return {ValidationReport::Kind::Structural, "constraint parameter k must be >= 1"};
  if (sys.constraint.kind == K::Chain || sys.constraint.kind == K::Partition) {
    if (const auto* eg = std::get_if<ExplicitGenerators>(&sys.generators)) {
      for (const NNVector& g : eg->vectors)
        if (!as_scaled_indicator(g, nullptr, nullptr))
          return {ValidationReport::Kind::Structural,
                  "chain/partition systems need indicator-shaped generators"};
    }
  }
  return {};
}

std::vector<NNVector> materialize_generators(const DecompSystem& sys, std::size_t limit) {
  if (const auto* eg = std::get_if<ExplicitGenerators>(&sys.generators)) return eg->vectors;
  if (std::holds_alternative<IndicatorGenerators>(sys.generators)) {
    const SubsetMask full = (SubsetMask(1) << sys.n) - 1;
    if (full > limit) throw std::length_error("indicator pool too large to materialize");
    std::vector<NNVector> out;
    out.reserve(full);
    for (SubsetMask e = 1; e <= full; ++e) out.push_back(indicator(sys.n, e));
    return out;
  }
  if (const auto* bg = std::get_if<BoxGridGenerators>(&sys.generators)) {
    std::size_t total = 1;
    std::vector<int> counts(sys.n);
    for (int i = 0; i < sys.n; ++i) {
      counts[i] = int(std::floor(bg->upper[i] / bg->step + kEps)) + 1;
      total *= std::size_t(counts[i]);
      if (total > limit) throw std::length_error("box grid too large to materialize");
    }
    std::vector<NNVector> out;
    out.reserve(total - 1);
    std::vector<int> idx(sys.n, 0);
    while (true) {
      NNVector g(sys.n);
      bool zero = true;
      for (int i = 0; i < sys.n; ++i) {
        g[i] = idx[i] * bg->step;
        if (idx[i] > 0) zero = false;
      }
      if (!zero) out.push_back(std::move(g));
      int i = 0;
      while (i < sys.n && ++idx[i] == counts[i]) idx[i++] = 0;
      if (i == sys.n) break;
    }
    return out;
  }
  throw std::invalid_argument("system has no explicit generator pool");
}

bool collection_satisfies(const CollectionConstraint& c, const std::vector<NNVector>& members) {
  using K = CollectionConstraint::Kind;
  switch (c.kind) {
    case K::Any:
      return true;
    case K::MaxParts:
      return int(members.size()) <= c.k;
    case K::Comonotone:
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
          if (!comonotone(members[i], members[j])) return false;
      return true;
    case K::DisjointSupport: {
      if (int(members.size()) > c.k) return false;
      SubsetMask seen = 0;
      for (const NNVector& g : members) {
        SubsetMask s = support_mask(g);
        if (s & seen) return false;
        seen |= s;
      }
      return true;
    }
    case K::Chain: {
      std::vector<SubsetMask> sets;
      for (const NNVector& g : members) {
        SubsetMask e;
        double level;
        if (!as_scaled_indicator(g, &e, &level)) return false;
        sets.push_back(e);
      }
      std::sort(sets.begin(), sets.end(),
                [](SubsetMask a, SubsetMask b) { return std::popcount(a) < std::popcount(b); });
      for (std::size_t i = 0; i + 1 < sets.size(); ++i)
        if ((sets[i] & sets[i + 1]) != sets[i]) return false;
      return true;
    }
    case K::Partition: {
      if (members.empty()) return false;
      const SubsetMask full = (SubsetMask(1) << members.front().size()) - 1;
      SubsetMask seen = 0;
      for (const NNVector& g : members) {
        SubsetMask e = support_mask(g);
        if (e == 0 || (e & seen)) return false;
        seen |= e;
      }
      return seen == full;
    }
  }
  return false;
}

}  // namespace decompint
