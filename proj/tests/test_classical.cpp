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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <stdexcept>

#include "decompint/classical.hpp"
#include "decompint/oracle.hpp"
#include "doctest.h"

using namespace decompint;

namespace {

double unit_real(std::mt19937& rng) {
  return static_cast<double>(rng()) * (1.0 / 4294967296.0);
}

Capacity random_capacity(std::mt19937& rng, int n) {
  std::vector<double> vals(std::size_t{1} << n, 0.0);
  const SubsetMask full = (SubsetMask{1} << n) - 1;
  for (SubsetMask e = 1; e <= full; ++e) {
    double base = 0.0;
    for (int i = 0; i < n; ++i)
      if (e & (SubsetMask{1} << i)) base = std::max(base, vals[e & ~(SubsetMask{1} << i)]);
    vals[e] = base + 0.05 + unit_real(rng);
  }
  return Capacity(n, std::move(vals));
}

NNVector random_vector(std::mt19937& rng, int n, double hi) {
  NNVector x(n);
  for (double& v : x) v = hi * unit_real(rng);
  return x;
}

/// The capacity used throughout: m({1}) = 0.3, m({2}) = 0.5, m({1,2}) = 1.
Capacity two_point() { return Capacity(2, {0.0, 0.3, 0.5, 1.0}); }

}  // namespace

TEST_CASE("hand-computed values on a two-point capacity at (2, 1)") {
  const Capacity m = two_point();
  const NNVector x = {2.0, 1.0};
  // sort formula: (2-1) * m({1}) + 1 * m({1,2})
  CHECK(choquet(m, x) == doctest::Approx(1.3));
  // best single set: m({1,2}) * 1
  CHECK(shilkret(m, x) == doctest::Approx(1.0));
  // best clipped set: min(1, m({1,2}))
  CHECK(sugeno(m, x) == doctest::Approx(1.0));
  // best partition: {1}, {2} gives 0.3*2 + 0.5*1
  CHECK(pan(m, x) == doctest::Approx(1.1));
  // LP: one unit of {1,2} plus one residual unit of {1} gives 1.3
  CHECK(concave(m, x) == doctest::Approx(1.3));
}

TEST_CASE("additive capacities collapse every integral to the weighted sum") {
  const std::vector<double> w = {0.5, 1.0, 2.0};
  const Capacity m = Capacity::additive(3, w);
  const NNVector x = {3.0, 1.0, 2.0};
  const double sum = 0.5 * 3 + 1.0 * 1 + 2.0 * 2;
  CHECK(choquet(m, x) == doctest::Approx(sum));
  CHECK(pan(m, x) == doctest::Approx(sum));
  CHECK(concave(m, x) == doctest::Approx(sum));
  CHECK(convex(m, x) == doctest::Approx(sum));
}

TEST_CASE("classical order relations hold on random instances") {
  std::mt19937 rng(11);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const Capacity m = random_capacity(rng, n);
    const NNVector x = random_vector(rng, n, 3.0);
    const double ch = choquet(m, x);
    CHECK(pan(m, x) >= shilkret(m, x) - 1e-9);   // partitions refine single sets
    CHECK(concave(m, x) >= pan(m, x) - 1e-9);    // the LP relaxes partitions
    CHECK(concave(m, x) >= ch - 1e-9);           // ... and chains
    CHECK(convex(m, x) <= ch + 1e-9);            // covering is at most the chain
  }
}

TEST_CASE("choquet chain witness reassembles the argument") {
  std::mt19937 rng(13);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const Capacity m = random_capacity(rng, n);
    const NNVector x = random_vector(rng, n, 3.0);
    NNVector rebuilt(n, 0.0);
    double total = 0.0;
    SubsetMask prev = m.full_mask() | (SubsetMask{1} << n);  // strictly shrinking chain
    for (const auto& [e, c] : choquet_chain(m, x)) {
      CHECK((e & ~prev) == 0u);  // nested
      prev = e;
      total += c * m.at(e);
      for (int i = 0; i < n; ++i)
        if (e & (SubsetMask{1} << i)) rebuilt[i] += c;
    }
    for (int i = 0; i < n; ++i) CHECK(rebuilt[i] == doctest::Approx(x[i]).epsilon(1e-9));
    CHECK(total == doctest::Approx(choquet(m, x)).epsilon(1e-9));
  }
}

TEST_CASE("pan partition witness uses disjoint blocks and matches the value") {
  std::mt19937 rng(17);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const Capacity m = random_capacity(rng, n);
    const NNVector x = random_vector(rng, n, 3.0);
    SubsetMask used = 0;
    double total = 0.0;
    for (const auto& [e, c] : pan_partition(m, x)) {
      CHECK((e & used) == 0u);
      used |= e;
      total += c * m.at(e);
    }
    CHECK(total == doctest::Approx(pan(m, x)).epsilon(1e-9));
  }
}

TEST_CASE("pan equals exhaustive partition enumeration up to five points") {
  std::mt19937 rng(19);
  for (int t = 0; t < 15; ++t) {
    const int n = 2 + static_cast<int>(rng() % 4);  // 2..5
    const Capacity m = random_capacity(rng, n);
    const NNVector x = random_vector(rng, n, 3.0);
    CHECK(pan(m, x) == doctest::Approx(brute_partitions(m, x)).epsilon(1e-9));
  }
}

TEST_CASE("level-dependent choquet on a two-band additive measure") {
  LevelDependentCapacity lc;
  lc.breakpoints = {2.0, 5.0};
  lc.slices = {Capacity::additive(3, {1.0, 0.5, 0.5}),
               Capacity::additive(3, {0.5, 1.0, 1.0})};
  lc.final_unbounded = true;
  CHECK(validate_level_capacity(lc).ok());

  // x = (3, 2, 5): band [0,2) sees {1,2,3}, (2,3] sees {1,3}, (3,5] sees {3}.
  CHECK(level_dependent_choquet(lc, {3.0, 2.0, 5.0}) == doctest::Approx(7.5));
  // constant slices reduce to the plain choquet integral
  LevelDependentCapacity flat;
  flat.breakpoints = {10.0};
  flat.slices = {Capacity::additive(3, {1.0, 0.5, 0.5})};
  CHECK(level_dependent_choquet(flat, {3.0, 2.0, 5.0}) ==
        doctest::Approx(choquet(flat.slices[0], {3.0, 2.0, 5.0})));
}

TEST_CASE("splitting a band without changing the measure changes nothing") {
  LevelDependentCapacity lc;
  lc.breakpoints = {4.0};
  lc.slices = {Capacity::additive(2, {1.0, 2.0})};
  LevelDependentCapacity split;
  split.breakpoints = {1.5, 4.0};
  split.slices = {lc.slices[0], lc.slices[0]};
  for (const NNVector& x : {NNVector{3.0, 1.0}, NNVector{0.5, 2.5}, NNVector{4.0, 4.0}})
    CHECK(level_dependent_choquet(lc, x) == doctest::Approx(level_dependent_choquet(split, x)));
}

TEST_CASE("queries beyond the covered range are rejected") {
  LevelDependentCapacity lc;
  lc.breakpoints = {2.0};
  lc.slices = {Capacity::additive(2, {1.0, 1.0})};
  lc.final_unbounded = false;
  CHECK_NOTHROW(level_dependent_choquet(lc, {2.0, 1.0}));
  CHECK_THROWS_AS(level_dependent_choquet(lc, {2.5, 1.0}), std::domain_error);

  lc.final_unbounded = true;
  CHECK(level_dependent_choquet(lc, {2.5, 0.0}) == doctest::Approx(2.5));
}

TEST_CASE("level capacity validation flags structural problems") {
  LevelDependentCapacity bad;
  bad.breakpoints = {2.0, 1.0};  // not increasing
  bad.slices = {Capacity::additive(2, {1.0, 1.0}), Capacity::additive(2, {1.0, 1.0})};
  CHECK(!validate_level_capacity(bad).ok());

  LevelDependentCapacity mismatch;
  mismatch.breakpoints = {1.0, 2.0};
  mismatch.slices = {Capacity::additive(2, {1.0, 1.0})};
  CHECK(!validate_level_capacity(mismatch).ok());

  LevelDependentCapacity arity;
  arity.breakpoints = {1.0, 2.0};
  arity.slices = {Capacity::additive(2, {1.0, 1.0}), Capacity::additive(3, {1.0, 1.0, 1.0})};
  CHECK(!validate_level_capacity(arity).ok());
}
