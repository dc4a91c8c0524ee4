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
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "decompint/runner.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace decompint;
using Json = nlohmann::json;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(DECOMPINT_FIXTURES) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parsing then serializing a canonical file must reproduce it byte for byte.
void check_canonical(const std::string& name) {
  CAPTURE(name);
  const std::string bytes = slurp(fixture_path(name));
  const ProblemFile p = parse_problem(bytes);
  CHECK(serialize_problem(p) == bytes);
}

void expect_reject(const std::string& text, const std::string& needle) {
  CAPTURE(text);
  CAPTURE(needle);
  try {
    parse_problem(text);
    FAIL_CHECK("expected a parse failure mentioning '" << needle << "'");
  } catch (const std::runtime_error& ex) {
    const std::string msg = ex.what();
    CHECK(msg.find("problem file") != std::string::npos);
    CHECK_MESSAGE(msg.find(needle) != std::string::npos, "got: " << msg);
  }
}

/// Minimal valid file that bad-input tests mutate.
Json base_doc() {
  return Json::parse(R"({
    "version": "decompint/1",
    "n": 2,
    "mode": "sub",
    "capacity": {"entries": [
      {"set": [1], "value": 0.4},
      {"set": [2], "value": 0.6},
      {"set": [1, 2], "value": 1.0}
    ]},
    "system": {"generators": {"indicator": true}},
    "queries": [[1.0, 2.0]]
  })");
}

}  // namespace

TEST_CASE("every shipped example file is in canonical form") {
  check_canonical("workers.json");
  check_canonical("fastfood.json");
  check_canonical("composition.json");
  check_canonical("concave.json");
  check_canonical("probabilistic_sum.json");
  check_canonical("max_log.json");
  check_canonical("diverging_sqrt.json");
  check_canonical("level.json");
}

TEST_CASE("the minimal document parses and re-serializes stably") {
  const std::string once = serialize_problem(parse_problem(base_doc().dump()));
  CHECK(serialize_problem(parse_problem(once)) == once);
  const ProblemFile p = parse_problem(once);
  CHECK(p.n == 2);
  CHECK(p.mode == "sub");
  CHECK(p.queries.size() == 1);
  CHECK(problem_capacity(p).at(3) == 1.0);
}

TEST_CASE("round trip covers every weighting, generator, and constraint") {
  ProblemFile p;
  p.n = 2;
  p.mode = "super";
  const Capacity m = Capacity::additive(2, {0.25, 0.75});

  const std::vector<Weighting> weightings = {
      TableWeighting{{{{1.0, 0.0}, 1.0}, {{0.5, 0.5}, 2.0}}, true},
      CapacityWeighting{m},
      CapacityMinWeighting{m},
      ClosedFormWeighting{ClosedFormKind::WeightedSum, {1.0, 2.0}, 1.0},
      ClosedFormWeighting{ClosedFormKind::MaxCoord, {}, 2.5},
      ClosedFormWeighting{ClosedFormKind::ProbabilisticSum, {}, 1.0},
      ClosedFormWeighting{ClosedFormKind::Product, {}, 1.0},
      ClosedFormWeighting{ClosedFormKind::MaxLog, {}, 1.0},
      ClosedFormWeighting{ClosedFormKind::XPlusSqrtY, {}, 1.0},
  };
  const std::vector<GeneratorSet> generators = {
      ExplicitGenerators{{{1.0, 0.0}, {0.5, 0.5}}},
      IndicatorGenerators{},
      BoxGridGenerators{{2.0, 2.0}, 0.25},
      FullOrthant{},
      FixedCollections{{{{1.0, 0.0}, {0.5, 0.5}}, {{2.0, 2.0}}}},
  };
  const std::vector<CollectionConstraint> constraints = {
      CollectionConstraint::any(),           CollectionConstraint::chain(),
      CollectionConstraint::partition(),     CollectionConstraint::disjoint_support(2),
      CollectionConstraint::comonotone(),    CollectionConstraint::max_parts(3),
  };
  const std::vector<CoeffDomain> domains = {CoeffDomain::NonNegReal, CoeffDomain::NonNegInt,
                                            CoeffDomain::UnitCoeff};

  for (std::size_t wi = 0; wi < weightings.size(); ++wi) {
    p.weighting = weightings[wi];
    DecompSystem sys;
    sys.n = 2;
    sys.generators = generators[wi % generators.size()];
    sys.coeff_domain = domains[wi % domains.size()];
    sys.constraint = constraints[wi % constraints.size()];
    p.system = sys;
    p.queries = {{1.0, 2.0}, {0.0, 0.0}};
    CAPTURE(wi);
    const std::string text = serialize_problem(p);
    CHECK(serialize_problem(parse_problem(text)) == text);
  }
}

TEST_CASE("level-dependent files round trip through the slices source") {
  ProblemFile p;
  p.n = 2;
  p.mode = "classical:level";
  LevelDependentCapacity lc;
  lc.breakpoints = {1.0, 3.0};
  lc.final_unbounded = true;
  lc.slices = {Capacity::additive(2, {1.0, 1.0}), Capacity::additive(2, {0.5, 0.5})};
  p.capacity_slices = lc;
  p.queries = {{2.0, 0.5}};
  const std::string text = serialize_problem(p);
  const ProblemFile q = parse_problem(text);
  REQUIRE(q.capacity_slices.has_value());
  CHECK(q.capacity_slices->breakpoints == lc.breakpoints);
  CHECK(q.capacity_slices->slices.size() == 2);
  CHECK(serialize_problem(q) == text);
}

TEST_CASE("malformed documents are rejected with field paths") {
  expect_reject("this is not json", "not valid JSON");
  expect_reject("[]", "top level must be an object");
  expect_reject("{}", "missing field 'version'");

  Json j = base_doc();
  j["version"] = "decompint/9";
  expect_reject(j.dump(), "unsupported version");

  j = base_doc();
  j["n"] = 0;
  expect_reject(j.dump(), "ground set size must lie in 1..20");
  j["n"] = 21;
  expect_reject(j.dump(), "ground set size must lie in 1..20");

  j = base_doc();
  j["mode"] = "banana";
  expect_reject(j.dump(), "unknown mode 'banana'");
  j["mode"] = "classical:banana";
  expect_reject(j.dump(), "unknown mode");
  j["mode"] = "check:banana";
  expect_reject(j.dump(), "unknown mode");
}

TEST_CASE("exactly one weighting source is required") {
  Json j = base_doc();
  j["table"] = Json::parse(R"({"entries": [{"vector": [1.0, 0.0], "value": 1.0}]})");
  expect_reject(j.dump(), "exactly one weighting source");

  j = base_doc();
  j.erase("capacity");
  expect_reject(j.dump(), "exactly one weighting source");
}

TEST_CASE("subset lists must be sorted, unique, in-range, and complete") {
  Json j = base_doc();
  j["capacity"]["entries"][2]["set"] = Json::array({2, 1});
  expect_reject(j.dump(), "strictly increasing");

  j = base_doc();
  j["capacity"]["entries"][2]["set"] = Json::array({1, 1});
  expect_reject(j.dump(), "strictly increasing");

  j = base_doc();
  j["capacity"]["entries"][2]["set"] = Json::array({3});
  expect_reject(j.dump(), "outside 1..2");

  j = base_doc();
  j["capacity"]["entries"][1]["set"] = Json::array({1});  // now {1} twice, {2} gone
  expect_reject(j.dump(), "duplicate subset");

  j = base_doc();
  j["capacity"]["entries"].erase(1);
  expect_reject(j.dump(), "missing entry");
}

TEST_CASE("queries must match the arity and stay nonnegative") {
  Json j = base_doc();
  j["queries"] = Json::array({Json::array({1.0, 2.0, 3.0})});
  expect_reject(j.dump(), "expected 2 coordinates, got 3");

  j = base_doc();
  j["queries"] = Json::array({Json::array({-1.0, 2.0})});
  expect_reject(j.dump(), "nonnegative");

  j = base_doc();
  j["queries"] = Json::object();
  expect_reject(j.dump(), "expected an array");
}

TEST_CASE("system blocks are validated field by field") {
  Json j = base_doc();
  j["system"]["generators"]["vectors"] = Json::array({Json::array({1.0, 0.0})});
  expect_reject(j.dump(), "exactly one of");

  j = base_doc();
  j["system"]["generators"] = Json::object();
  expect_reject(j.dump(), "exactly one of");

  j = base_doc();
  j["system"]["generators"] = Json::parse(R"({"indicator": false})");
  expect_reject(j.dump(), "must be true when present");

  j = base_doc();
  j["system"]["generators"] =
      Json::parse(R"({"box": {"upper": [1.0, 1.0], "step": 0.0}})");
  expect_reject(j.dump(), "step must be positive");

  j = base_doc();
  j["system"]["coeff_domain"] = "complex";
  expect_reject(j.dump(), "unknown coefficient domain");

  j = base_doc();
  j["system"]["constraint"] = Json::parse(R"({"kind": "ring"})");
  expect_reject(j.dump(), "unknown constraint 'ring'");

  j = base_doc();
  j["system"]["constraint"] = Json::parse(R"({"kind": "max_parts"})");
  expect_reject(j.dump(), "missing field 'k'");

  j = base_doc();
  j["system"]["constraint"] = Json::parse(R"({"kind": "disjoint_support", "k": 0})");
  expect_reject(j.dump(), "k must be at least 1");
}

TEST_CASE("missing files raise a readable error") {
  CHECK_THROWS_WITH_AS(load_problem("/nonexistent/path.json"),
                       "problem file: cannot open '/nonexistent/path.json'", std::runtime_error);
}

TEST_CASE("running a file produces one record per query") {
  const ProblemFile p = load_problem(fixture_path("workers.json"));
  const RunOutcome out = run_problem(p);
  CHECK(out.exit_code == 0);
  const Json doc = Json::parse(out.document);
  CHECK(doc["mode"] == "sub");
  REQUIRE(doc["results"].size() == 1);
  const Json& rec = doc["results"][0];
  CHECK(rec["query"] == Json::array({2.0, 2.0}));
  CHECK(rec["status"] == "exact");
  CHECK(rec["value"].get<double>() == doctest::Approx(4.6));
  CHECK(rec["witness"].size() == 2);
  CHECK(rec["wall_seconds"].get<double>() >= 0.0);
}

TEST_CASE("an empty query list yields an empty result list") {
  ProblemFile p = load_problem(fixture_path("workers.json"));
  p.queries.clear();
  const RunOutcome out = run_problem(p);
  CHECK(out.exit_code == 0);
  CHECK(Json::parse(out.document)["results"].empty());
}

TEST_CASE("diverging instances exit with the divergence code") {
  const ProblemFile p = load_problem(fixture_path("diverging_sqrt.json"));
  const RunOutcome out = run_problem(p);
  CHECK(out.exit_code == 2);
  const Json doc = Json::parse(out.document);
  CHECK(doc["results"][0]["status"] == "unbounded");
  CHECK(doc["results"][0]["value"].get<double>() > 1e3);
}

TEST_CASE("oracle runs report both directions with node counts") {
  ProblemFile p = load_problem(fixture_path("workers.json"));
  p.mode = "oracle";
  const RunOutcome out = run_problem(p);
  CHECK(out.exit_code == 0);
  const Json rec = Json::parse(out.document)["results"][0];
  CHECK(rec["sub"]["feasible"] == true);
  CHECK(rec["sub"]["value"].get<double>() == doctest::Approx(4.6));
  CHECK(rec["sub"]["nodes"].get<long long>() > 0);
  CHECK(rec["super"]["value"].get<double>() == doctest::Approx(4.0));
}

TEST_CASE("oracle refusals surface in the document and the exit code") {
  ProblemFile p = load_problem(fixture_path("max_log.json"));
  p.mode = "oracle";  // full orthant: the oracle must refuse
  const RunOutcome out = run_problem(p);
  CHECK(out.exit_code == 2);
  const Json rec = Json::parse(out.document)["results"][0];
  const std::string why = rec["sub"]["refused"].get<std::string>();
  CHECK(why.find("full orthant") != std::string::npos);
}

TEST_CASE("check modes return a suite scoreboard") {
  ProblemFile p;
  p.n = 2;
  p.mode = "check:monotonicity";
  RunFlags flags;
  flags.size = 20;
  const RunOutcome out = run_problem(p, flags);
  CHECK(out.exit_code == 0);
  const Json suite = Json::parse(out.document)["suite"];
  CHECK(suite["name"] == "monotonicity");
  CHECK(suite["total"].get<int>() == 20);
  CHECK(suite["passed"].get<int>() == 20);
  CHECK(suite["first_counterexample"].get<std::string>().empty());
}

TEST_CASE("mode overrides replace the file's mode") {
  const ProblemFile p = load_problem(fixture_path("workers.json"));
  RunFlags flags;
  flags.mode = "maxpseudo";
  const Json doc = Json::parse(run_problem(p, flags).document);
  CHECK(doc["mode"] == "maxpseudo");
  CHECK(doc["results"][0]["value"].get<double>() == doctest::Approx(4.3));
  flags.mode = "nonsense";
  CHECK_THROWS_AS(run_problem(p, flags), std::runtime_error);
}

TEST_CASE("explanations list the decomposition and its slack") {
  const ProblemFile p = load_problem(fixture_path("workers.json"));
  const std::string text = explain_query(p, {2.0, 2.0});
  CHECK(text.find("A(2, 1) = 3.5") != std::string::npos);
  CHECK(text.find("A(0, 1) = 1.1") != std::string::npos);
  CHECK(text.find("total = 4.6") != std::string::npos);
  CHECK(text.find("slack = (0, 0)") != std::string::npos);
}

TEST_CASE("explanations of covers report the surplus") {
  ProblemFile p = load_problem(fixture_path("fastfood.json"));
  const std::string text = explain_query(p, {19.0, 10.0, 10.0});
  CHECK(text.find("[super]") != std::string::npos);
  CHECK(text.find("total = 54.1") != std::string::npos);
  CHECK(text.find("surplus = ") != std::string::npos);
}

TEST_CASE("explanations fall back to status lines off the exact path") {
  const ProblemFile diverging = load_problem(fixture_path("diverging_sqrt.json"));
  const std::string text = explain_query(diverging, {1.0, 1.0});
  CHECK(text.find("status unbounded") != std::string::npos);

  const ProblemFile empty = load_problem(fixture_path("workers.json"));
  const std::string zero = explain_query(empty, {0.5, 0.5});
  CHECK(zero.find("(empty decomposition)") != std::string::npos);
  CHECK(zero.find("total = 0") != std::string::npos);

  CHECK_THROWS_AS(explain_query(empty, {2.0, 2.0}, RunFlags{.mode = "oracle"}),
                  std::runtime_error);
}
