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
#include <random>
#include <stdexcept>

#include "decompint/classical.hpp"
#include "decompint/decomp.hpp"
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

/// Staffing table: value of each complete group that can be hired whole.
Base workers_base() {
  Base b;
  b.system.n = 2;
  ExplicitGenerators g;
  g.vectors = {{1, 0}, {2, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 1}, {1, 2}, {2, 2}};
  b.system.generators = std::move(g);
  b.system.coeff_domain = CoeffDomain::UnitCoeff;
  TableWeighting t;
  t.values = {{{1, 0}, 1.0}, {{2, 0}, 2.2}, {{0, 1}, 1.1}, {{0, 2}, 2.0},
              {{1, 1}, 2.2}, {{2, 1}, 3.5}, {{1, 2}, 3.0}, {{2, 2}, 4.3}};
  b.weighting = std::move(t);
  return b;
}

/// Menu of offers with prices; demand must be covered by whole offers.
Base fastfood_base() {
  Base b;
  b.system.n = 3;
  ExplicitGenerators g;
  g.vectors = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1},
               {2, 0, 0}, {1, 0, 1}, {0, 1, 1}, {2, 1, 1}};
  b.system.generators = std::move(g);
  b.system.coeff_domain = CoeffDomain::NonNegInt;
  TableWeighting t;
  t.values = {{{1, 0, 0}, 2.80}, {{0, 1, 0}, 1.60}, {{0, 0, 1}, 1.80}, {{1, 1, 1}, 4.80},
              {{2, 0, 0}, 3.00}, {{1, 0, 1}, 3.00}, {{0, 1, 1}, 3.00}, {{2, 1, 1}, 5.50}};
  b.weighting = std::move(t);
  return b;
}

Base indicator_base(const Capacity& m, CollectionConstraint c) {
  Base b;
  b.system.n = m.ground_size();
  b.system.generators = IndicatorGenerators{};
  b.system.coeff_domain = CoeffDomain::NonNegReal;
  b.system.constraint = c;
  b.weighting = CapacityWeighting{m};
  return b;
}

/// A closed list of collections over three goods, with a value table.
Base composition_base() {
  Base b;
  b.system.n = 3;
  FixedCollections fc;
  fc.collections = {{{0, 2, 1}, {2, 0, 0}}, {{2, 2, 1}, {0, 1, 2}}, {{0, 1, 2}}};
  b.system.generators = std::move(fc);
  b.system.coeff_domain = CoeffDomain::UnitCoeff;
  TableWeighting t;
  t.values = {{{0, 2, 1}, 2.0}, {{2, 0, 0}, 2.0}, {{0, 1, 2}, 2.0}, {{2, 2, 1}, 3.0}};
  b.weighting = std::move(t);
  return b;
}

}  // namespace

TEST_CASE("staffing example: best hire under the demand cap") {
  const Base b = workers_base();
  const IntegralResult r = sub_integral(b, {2, 2});
  REQUIRE(r.status == IntegralStatus::Exact);
  CHECK(r.value == doctest::Approx(4.6).epsilon(1e-12));
  CHECK(verify_witness(b, {2, 2}, r, false));

  // the witness is the 3.5 + 1.1 split
  REQUIRE(r.witness.size() == 2);
  double total = 0.0;
  for (const WitnessPart& p : r.witness) total += p.coeff * *evaluate(b.weighting, p.vector);
  CHECK(total == doctest::Approx(4.6));
}

TEST_CASE("empty feasible family yields zero, not an error") {
  const Base b = workers_base();
  // no member fits under (0.5, 0.5), so the supremum over nothing is 0
  const IntegralResult r = sub_integral(b, {0.5, 0.5});
  CHECK(r.status == IntegralStatus::Exact);
  CHECK(r.value == 0.0);
  CHECK(r.witness.empty());
  CHECK(sub_integral(b, {0.0, 0.0}).value == 0.0);
}

TEST_CASE("menu covering: branch and bound reaches the known prices") {
  const Base b = fastfood_base();
  const IntegralResult big = super_integral(b, {50, 30, 60});
  REQUIRE(big.status == IntegralStatus::Exact);
  CHECK(big.value == doctest::Approx(205.0).epsilon(1e-12));
  CHECK(verify_witness(b, {50, 30, 60}, big, true));

  const IntegralResult small = super_integral(b, {19, 10, 10});
  REQUIRE(small.status == IntegralStatus::Exact);
  CHECK(small.value == doctest::Approx(54.1).epsilon(1e-12));
  CHECK(verify_witness(b, {19, 10, 10}, small, true));

  CHECK(super_integral(b, {0, 0, 0}).value == 0.0);
}

TEST_CASE("covering an unreachable coordinate is infeasible") {
  Base b;
  b.system.n = 2;
  ExplicitGenerators g;
  g.vectors = {{1, 0}};
  b.system.generators = std::move(g);
  b.system.coeff_domain = CoeffDomain::NonNegInt;
  TableWeighting t;
  t.values = {{{1, 0}, 1.0}};
  b.weighting = std::move(t);
  CHECK(super_integral(b, {1, 1}).status == IntegralStatus::InfeasibleDomain);
  CHECK(super_integral(b, {2, 0}).status == IntegralStatus::Exact);
}

TEST_CASE("closed collection list: values come only from the listed bundles") {
  const Base b = composition_base();
  CHECK(sub_integral(b, {0, 2, 1}).value == doctest::Approx(0.0));
  CHECK(sub_integral(b, {2, 0, 0}).value == doctest::Approx(0.0));
  CHECK(sub_integral(b, {0, 1, 2}).value == doctest::Approx(2.0));
  CHECK(sub_integral(b, {2, 2, 1}).value == doctest::Approx(4.0));
  CHECK(sub_integral(b, {2, 3, 3}).value == doctest::Approx(5.0));
}

TEST_CASE("iterating the integral can strictly enlarge it") {
  const Base b = composition_base();
  const IteratedResult at_corner = iterated_sub_integral(b, {2, 2, 1});
  CHECK(at_corner.result.value == doctest::Approx(0.0));
  const IteratedResult at_top = iterated_sub_integral(b, {2, 3, 3});
  CHECK(at_top.result.value == doctest::Approx(6.0));  // 4 + 2 beats the direct 5
  CHECK(at_top.induced.at({2, 2, 1}) == doctest::Approx(4.0));
  CHECK(at_top.induced.at({0, 1, 2}) == doctest::Approx(2.0));
  CHECK(at_top.induced.at({0, 2, 1}) == doctest::Approx(0.0));
}

TEST_CASE("iteration refuses a base whose induced weighting vanishes") {
  Base b;
  b.system.n = 2;
  FixedCollections fc;
  fc.collections = {{{2, 2}, {1, 1}}};  // the pair never fits under either member
  b.system.generators = std::move(fc);
  b.system.coeff_domain = CoeffDomain::UnitCoeff;
  TableWeighting t;
  t.values = {{{2, 2}, 1.0}, {{1, 1}, 1.0}};
  b.weighting = std::move(t);
  CHECK_THROWS_AS(iterated_sub_integral(b, {3, 3}), std::domain_error);
}

TEST_CASE("indicator systems reduce to the classical integrals") {
  std::mt19937 rng(23);
  for (int t = 0; t < 25; ++t) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const Capacity m = random_capacity(rng, n);
    const NNVector x = random_vector(rng, n, 3.0);

    const double chain_sub =
        sub_integral(indicator_base(m, CollectionConstraint::chain()), x).value;
    CHECK(chain_sub == doctest::Approx(choquet(m, x)).epsilon(1e-7));

    const double chain_super =
        super_integral(indicator_base(m, CollectionConstraint::chain()), x).value;
    CHECK(chain_super == doctest::Approx(choquet(m, x)).epsilon(1e-7));

    const double part_sub =
        sub_integral(indicator_base(m, CollectionConstraint::partition()), x).value;
    CHECK(part_sub == doctest::Approx(pan(m, x)).epsilon(1e-7));

    const double free_sub = sub_integral(indicator_base(m, CollectionConstraint::any()), x).value;
    CHECK(free_sub == doctest::Approx(concave(m, x)).epsilon(1e-7));

    const double free_super =
        super_integral(indicator_base(m, CollectionConstraint::any()), x).value;
    CHECK(free_super == doctest::Approx(convex(m, x)).epsilon(1e-7));

    const double single =
        sub_integral(indicator_base(m, CollectionConstraint::max_parts(1)), x).value;
    CHECK(single == doctest::Approx(shilkret(m, x)).epsilon(1e-7));
  }
}

TEST_CASE("comonotone collections of indicators recover the chain value") {
  std::mt19937 rng(29);
  for (int t = 0; t < 15; ++t) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const Capacity m = random_capacity(rng, n);
    const NNVector x = random_vector(rng, n, 3.0);
    const double com =
        sub_integral(indicator_base(m, CollectionConstraint::comonotone()), x).value;
    CHECK(com == doctest::Approx(choquet(m, x)).epsilon(1e-7));
    CHECK(comonotone_integral(CapacityWeighting{m}, x, 1.0 / 64).value ==
          doctest::Approx(choquet(m, x)).epsilon(1e-7));
  }
}

TEST_CASE("linear weightings pass through both transforms unchanged") {
  const ClosedFormWeighting w{ClosedFormKind::WeightedSum, {2.0, 1.0}, 1.0};
  const NNVector x = {1.5, 2.5};  // on the default lattice
  CHECK(superadditive_transform(w, x, 0, 1.0 / 64).value == doctest::Approx(5.5).epsilon(1e-9));
  CHECK(subadditive_transform(w, x, 0, 1.0 / 64).value == doctest::Approx(5.5).epsilon(1e-9));
}

TEST_CASE("probabilistic-sum covering matches its closed form") {
  const ClosedFormWeighting w{ClosedFormKind::ProbabilisticSum, {}, 1.0};
  // inside the unit box a single member is optimal
  const IntegralResult one = subadditive_transform(w, {0.5, 0.5}, 0, 1.0 / 64);
  CHECK(one.value == doctest::Approx(0.75).epsilon(1e-9));
  // the diagonal box [1,2]^2: reference (k+1)(x+y-k) - xy with k = 1
  const IntegralResult mid = subadditive_transform(w, {1.5, 1.5}, 0, 1.0 / 64);
  CHECK(mid.status == IntegralStatus::Approximate);
  CHECK(std::abs(mid.value - 1.75) <= 0.05);
  // off the diagonal boxes the reference is max(x, y)
  const IntegralResult off = subadditive_transform(w, {2.25, 0.75}, 0, 1.0 / 64);
  CHECK(std::abs(off.value - 2.25) <= 0.05);
}

TEST_CASE("box-grid systems answer through the lattice programs") {
  Base b;
  b.system.n = 2;
  b.system.generators = BoxGridGenerators{{1.0, 1.0}, 1.0 / 64};
  b.system.coeff_domain = CoeffDomain::NonNegInt;
  b.weighting = ClosedFormWeighting{ClosedFormKind::ProbabilisticSum, {}, 1.0};
  const IntegralResult r = super_integral(b, {1.5, 1.5});
  CHECK(r.status == IntegralStatus::Approximate);
  CHECK(r.error_bound > 0.0);
  CHECK(std::abs(r.value - 1.75) <= 0.05);
  CHECK(verify_witness(b, {1.5, 1.5}, r, true));
}

TEST_CASE("batched transforms agree with their single-query forms") {
  const ClosedFormWeighting prob{ClosedFormKind::ProbabilisticSum, {}, 1.0};
  const std::vector<NNVector> xs = {{0.25, 0.75}, {1.5, 1.5}, {0.0, 0.0}, {2.25, 0.75}};
  const auto supers = subadditive_transform_many(prob, xs, 1.0 / 64);
  const auto subs = superadditive_transform_many(prob, xs, 1.0 / 64);
  REQUIRE(supers.size() == xs.size());
  REQUIRE(subs.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(supers[i].value ==
          doctest::Approx(subadditive_transform(prob, xs[i], 0, 1.0 / 64).value).epsilon(1e-9));
    CHECK(subs[i].value ==
          doctest::Approx(superadditive_transform(prob, xs[i], 0, 1.0 / 64).value).epsilon(1e-9));
  }
  CHECK(supers[2].status == IntegralStatus::Exact);  // zero query short-circuits
}

TEST_CASE("batched comonotone integrals agree with singles") {
  const ClosedFormWeighting prod{ClosedFormKind::Product, {}, 1.0};
  const std::vector<NNVector> xs = {{0.5, 1.0}, {1.0, 0.25}, {0.0, 0.0}};
  const auto batch = comonotone_integral_many(prod, xs, 1.0 / 32);
  REQUIRE(batch.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(batch[i].value ==
          doctest::Approx(comonotone_integral(prod, xs[i], 1.0 / 32).value).epsilon(1e-9));
  CHECK(batch[2].status == IntegralStatus::Exact);
}

TEST_CASE("more parts never hurt the lower transform") {
  const ClosedFormWeighting w{ClosedFormKind::ProbabilisticSum, {}, 1.0};
  const NNVector x = {0.9, 0.9};
  const double one = superadditive_transform(w, x, 1, 1.0 / 64).value;
  const double two = superadditive_transform(w, x, 2, 1.0 / 64).value;
  const double many = superadditive_transform(w, x, 0, 1.0 / 64).value;
  CHECK(one == doctest::Approx(evaluate(w, x).value()));
  CHECK(two >= one - 1e-9);
  CHECK(many >= two - 1e-9);
}

TEST_CASE("single-part integrals evaluate the weighting directly") {
  const ClosedFormWeighting prod{ClosedFormKind::Product, {}, 1.0};
  const IntegralResult r = fixed_length_integral(prod, {0.5, 0.5}, 1, 1.0 / 64);
  CHECK(r.status == IntegralStatus::Exact);
  CHECK(r.value == doctest::Approx(0.25));
}

TEST_CASE("max-log system: aggregation limits across constraints") {
  const ClosedFormWeighting w{ClosedFormKind::MaxLog, {}, 1.0};
  // free decompositions approach x + y
  const double free_v = superadditive_transform(w, {1.0, 2.0}, 0, 1.0 / 64).value;
  CHECK(std::abs(free_v - 3.0) <= 0.05);
  // comonotone decompositions approach max(x, y)
  const double com = comonotone_integral(w, {1.0, 2.0}, 1.0 / 64).value;
  CHECK(std::abs(com - 2.0) <= 0.05);
  CHECK(free_v >= com - 1e-9);  // fewer constraints, no smaller supremum
}

TEST_CASE("disjoint-support optimum coincides with partitions for capacities") {
  std::mt19937 rng(31);
  for (int t = 0; t < 10; ++t) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const Capacity m = random_capacity(rng, n);
    const NNVector x = random_vector(rng, n, 3.0);
    CHECK(disjoint_support_integral(CapacityWeighting{m}, x, n).value ==
          doctest::Approx(pan(m, x)).epsilon(1e-9));
  }
}

TEST_CASE("disjointly supported pairs aggregate superadditively") {
  std::mt19937 rng(37);
  for (int t = 0; t < 10; ++t) {
    const int n = 3 + static_cast<int>(rng() % 2);
    const Capacity m = random_capacity(rng, n);
    NNVector x(n, 0.0), y(n, 0.0);
    for (int i = 0; i < n; ++i)
      (i % 2 ? x : y)[i] = 0.1 + 2.9 * unit_real(rng);
    NNVector sum(n);
    for (int i = 0; i < n; ++i) sum[i] = x[i] + y[i];
    const Weighting w = CapacityWeighting{m};
    CHECK(disjoint_support_integral(w, sum, n).value >=
          disjoint_support_integral(w, x, n).value + disjoint_support_integral(w, y, n).value -
              1e-9);
  }
}

TEST_CASE("max-aggregation is the best feasible single member") {
  const Base b = workers_base();
  const IntegralResult r = max_pseudo_integral(b, {2, 2});
  CHECK(r.status == IntegralStatus::Exact);
  CHECK(r.value == doctest::Approx(4.3));  // the whole table row at (2,2)
  REQUIRE(r.witness.size() == 1);
  // summation dominates maximization on the same system
  CHECK(sub_integral(b, {2, 2}).value >= r.value - 1e-9);
  CHECK_THROWS_AS(
      max_pseudo_integral(indicator_base(Capacity::additive(2, {1.0, 1.0}),
                                         CollectionConstraint::partition()),
                          {1.0, 1.0}),
      std::invalid_argument);
}

TEST_CASE("subset-sum staffing variant") {
  CHECK(knapsack_integral({3.0, 4.0, 5.0}, 7.0).value == doctest::Approx(7.0));
  CHECK(knapsack_integral({3.0, 4.0, 5.0}, 2.0).value == doctest::Approx(0.0));
  CHECK(knapsack_integral({3.0, 4.0, 5.0}, 12.0).value == doctest::Approx(12.0));

  std::mt19937 rng(41);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> weights;
    const int k = 2 + static_cast<int>(rng() % 5);
    for (int j = 0; j < k; ++j) weights.push_back(0.5 + 4.5 * unit_real(rng));
    const double cap = 2.0 + 6.0 * unit_real(rng);
    double best_single = 0.0;
    for (double w : weights)
      if (w <= cap + 1e-12) best_single = std::max(best_single, w);
    const double total = knapsack_integral(weights, cap).value;
    CHECK(total >= best_single - 1e-9);  // summation beats maximization
    CHECK(total <= cap + 1e-9);
  }
}

TEST_CASE("divergence detection over the full orthant") {
  Base b;
  b.system.n = 2;
  b.system.generators = FullOrthant{};
  b.system.coeff_domain = CoeffDomain::NonNegReal;
  b.weighting = ClosedFormWeighting{ClosedFormKind::XPlusSqrtY, {}, 1.0};

  const IntegrabilityReport report = is_sub_integrable(b, {1.0, 1.0});
  CHECK(report.verdict == Integrability::No);
  CHECK(report.witness_value > 1e3);
  CHECK(!report.witness.empty());

  const IntegralResult r = sub_integral(b, {1.0, 1.0});
  CHECK(r.status == IntegralStatus::Unbounded);

  Base lin = b;
  lin.weighting = ClosedFormWeighting{ClosedFormKind::WeightedSum, {1.0, 2.0}, 1.0};
  CHECK(is_sub_integrable(lin, {1.0, 1.0}).verdict == Integrability::Yes);

  const Base finite = workers_base();
  CHECK(is_sub_integrable(finite, {2.0, 2.0}).verdict == Integrability::Yes);
}

TEST_CASE("conorm and norm integrals complement each other on the unit square") {
  std::vector<NNVector> samples;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) samples.push_back({i / 4.0, j / 4.0});
  const FrankReport fr =
      frank_check(ClosedFormWeighting{ClosedFormKind::ProbabilisticSum, {}, 1.0},
                  ClosedFormWeighting{ClosedFormKind::Product, {}, 1.0}, samples, 1.0 / 64);
  CHECK(fr.rows.size() == samples.size());
  CHECK(fr.max_abs_residual <= 0.05);
}

TEST_CASE("repeated runs return identical values and witnesses") {
  const Base b = fastfood_base();
  const IntegralResult a = super_integral(b, {19, 10, 10});
  const IntegralResult c = super_integral(b, {19, 10, 10});
  CHECK(a.value == c.value);
  REQUIRE(a.witness.size() == c.witness.size());
  for (std::size_t i = 0; i < a.witness.size(); ++i) {
    CHECK(a.witness[i].vector == c.witness[i].vector);
    CHECK(a.witness[i].coeff == c.witness[i].coeff);
  }
}

TEST_CASE("structural validation rejects malformed bases") {
  Base b = workers_base();
  CHECK_THROWS_AS(sub_integral(b, {1.0}), std::invalid_argument);  // arity mismatch

  Base zero = workers_base();
  std::get<ExplicitGenerators>(zero.system.generators).vectors.push_back({0.0, 0.0});
  CHECK_THROWS_AS(sub_integral(zero, {1.0, 1.0}), std::invalid_argument);

  // capacity weightings require indicator-shaped generators
  Base mixed;
  mixed.system.n = 2;
  ExplicitGenerators g;
  g.vectors = {{1.0, 2.0}};
  mixed.system.generators = std::move(g);
  mixed.system.coeff_domain = CoeffDomain::NonNegReal;
  mixed.weighting = CapacityWeighting{Capacity::additive(2, {1.0, 1.0})};
  CHECK_THROWS_AS(sub_integral(mixed, {1.0, 1.0}), std::invalid_argument);
}
