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
#include <cmath>
#include <map>
#include <stdexcept>

#include "decompint/types.hpp"
#include "decompint/weighting.hpp"
#include "doctest.h"

using namespace decompint;

TEST_CASE("capacity construction and accessors") {
  const Capacity m = Capacity::additive(3, {0.5, 1.0, 2.0});
  CHECK(m.ground_size() == 3);
  CHECK(m.full_mask() == 0b111);
  CHECK(m.at(0) == doctest::Approx(0.0));
  CHECK(m.at(0b001) == doctest::Approx(0.5));
  CHECK(m.at(0b110) == doctest::Approx(3.0));
  CHECK(m.at(0b111) == doctest::Approx(3.5));

  CHECK_THROWS_AS(Capacity(2, std::vector<double>{0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Capacity(0, std::vector<double>{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Capacity(21, std::vector<double>(std::size_t{1} << 21, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("capacity validation catches each axiom separately") {
  const Capacity ok = Capacity::additive(2, {1.0, 2.0});
  CHECK(validate_capacity(ok).ok());

  // nonzero mass on the empty set
  CHECK(validate_capacity(ok.with_value(0, 0.5)).kind == ValidationReport::Kind::Boundary);
  // vanishing on the full set
  const Capacity flat(2, std::vector<double>{0.0, 0.0, 0.0, 0.0});
  CHECK(validate_capacity(flat).kind == ValidationReport::Kind::Boundary);
  // order violation on an edge
  const Capacity dip = ok.with_value(0b11, 0.5);
  const ValidationReport r = validate_capacity(dip);
  CHECK(r.kind == ValidationReport::Kind::Monotonicity);
  CHECK(!r.detail.empty());
  // NaN is structural
  CHECK(validate_capacity(ok.with_value(0b01, std::nan(""))).kind ==
        ValidationReport::Kind::Structural);
}

TEST_CASE("sparse capacity entries must be complete") {
  std::map<SubsetMask, double> entries = {{0, 0.0}, {1, 1.0}, {2, 1.0}, {3, 2.0}};
  CHECK(validate_capacity(2, entries).ok());
  CHECK(capacity_from_map(2, entries).at(3) == doctest::Approx(2.0));

  entries.erase(2);
  CHECK(validate_capacity(2, entries).kind == ValidationReport::Kind::Structural);
  CHECK_THROWS_AS(capacity_from_map(2, entries), std::invalid_argument);
}

TEST_CASE("componentwise order with tolerance") {
  CHECK(leq({1.0, 2.0}, {1.0, 2.0}));
  CHECK(leq({1.0, 2.0}, {1.5, 2.0}));
  CHECK(!leq({1.0, 2.1}, {1.5, 2.0}));
  CHECK(leq({1.0 + 1e-12, 2.0}, {1.0, 2.0}));  // inside the tolerance band
}

TEST_CASE("comonotonicity is pairwise order agreement") {
  CHECK(comonotone({1.0, 2.0, 3.0}, {0.5, 0.5, 4.0}));
  CHECK(!comonotone({1.0, 2.0}, {2.0, 1.0}));
  CHECK(comonotone({1.0, 1.0}, {5.0, 0.0}));  // ties on one side never object
  CHECK(comonotone({0.0, 0.0}, {1.0, 2.0}));
}

TEST_CASE("indicator vectors, supports, and scaled-indicator recovery") {
  CHECK(indicator(3, 0b101) == NNVector{1.0, 0.0, 1.0});
  CHECK(indicator(3, 0b010, 2.5) == NNVector{0.0, 2.5, 0.0});
  CHECK(support_mask({0.0, 3.0, 1e-12}) == 0b010);

  SubsetMask e = 0;
  double c = 0.0;
  CHECK(as_scaled_indicator({0.0, 2.5, 2.5}, &e, &c));
  CHECK(e == 0b110);
  CHECK(c == doctest::Approx(2.5));
  CHECK(!as_scaled_indicator({0.0, 0.0}, &e, &c));
  CHECK(!as_scaled_indicator({1.0, 2.0}, &e, &c));
}

TEST_CASE("mask and index list conversions invert each other") {
  CHECK(mask_to_indices(0b101) == std::vector<int>{1, 3});
  CHECK(mask_from_indices(3, {1, 3}) == 0b101u);
  for (SubsetMask e = 0; e < 32; ++e) CHECK(mask_from_indices(5, mask_to_indices(e)) == e);
  CHECK_THROWS_AS(mask_from_indices(2, {3}), std::invalid_argument);
}

TEST_CASE("diagnostic formatting") {
  CHECK(format_vector({2.0, 1.0}) == "(2, 1)");
  CHECK(format_vector({0.5, 0.0, 1.25}) == "(0.5, 0, 1.25)");
  CHECK(format_mask(0b101) == "{1, 3}");
}

TEST_CASE("weighting evaluation across the variant") {
  TableWeighting t;
  t.values = {{{1.0, 0.0}, 2.0}, {{0.0, 1.0}, 1.0}};
  CHECK(evaluate(t, {1.0, 0.0}) == 2.0);
  CHECK(!evaluate(t, {2.0, 0.0}).has_value());

  t.homogeneous = true;
  CHECK(evaluate(t, {2.0, 0.0}) == doctest::Approx(4.0));  // positive scaling extends
  CHECK(evaluate(t, {0.0, 0.0}) == doctest::Approx(0.0));

  const CapacityWeighting c{Capacity::additive(2, {1.0, 3.0})};
  CHECK(evaluate(c, {2.0, 2.0}) == doctest::Approx(8.0));
  CHECK(evaluate(c, {2.0, 0.0}) == doctest::Approx(2.0));
  CHECK(!evaluate(c, {2.0, 1.0}).has_value());  // not a scaled indicator

  const CapacityMinWeighting cm{Capacity::additive(2, {1.0, 3.0})};
  CHECK(evaluate(cm, {2.0, 2.0}) == doctest::Approx(std::min(2.0, 4.0)));

  const ClosedFormWeighting probsum{ClosedFormKind::ProbabilisticSum, {}, 1.0};
  CHECK(evaluate(probsum, {0.5, 0.5}) == doctest::Approx(0.75));
  CHECK(!evaluate(probsum, {1.5, 0.5}).has_value());  // outside the unit box

  const ClosedFormWeighting sqrty{ClosedFormKind::XPlusSqrtY, {}, 1.0};
  CHECK(evaluate(sqrty, {1.0, 4.0}) == doctest::Approx(3.0));
}

TEST_CASE("homogeneity detection drives the LP route") {
  CHECK(is_homogeneous(CapacityWeighting{Capacity::additive(2, {1.0, 1.0})}));
  CHECK(!is_homogeneous(CapacityMinWeighting{Capacity::additive(2, {1.0, 1.0})}));
  CHECK(is_homogeneous(ClosedFormWeighting{ClosedFormKind::WeightedSum, {1.0, 2.0}, 1.0}));
  CHECK(is_homogeneous(ClosedFormWeighting{ClosedFormKind::MaxCoord, {}, 2.0}));
  CHECK(!is_homogeneous(ClosedFormWeighting{ClosedFormKind::Product, {}, 1.0}));

  TableWeighting t;
  t.values = {{{1.0, 0.0}, 2.0}};
  CHECK(!is_homogeneous(t));
  t.homogeneous = true;
  CHECK(is_homogeneous(t));
}
