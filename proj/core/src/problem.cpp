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

#include "decompint/problem.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace decompint {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("problem file: " + where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double number_at(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int int_at(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

bool bool_at(const Json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

std::string string_at(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

NNVector vector_at(const Json& j, int n, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  if (n > 0 && static_cast<int>(j.size()) != n)
    fail(where, "expected " + std::to_string(n) + " coordinates, got " +
                    std::to_string(j.size()));
  NNVector x;
  x.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const double v = number_at(j[i], where + "[" + std::to_string(i) + "]");
    if (v < 0.0) fail(where + "[" + std::to_string(i) + "]", "coordinates must be nonnegative");
    x.push_back(v);
  }
  return x;
}

SubsetMask subset_at(const Json& j, int n, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a sorted list of 1-based indices");
  std::vector<int> indices;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const int e = int_at(j[i], where + "[" + std::to_string(i) + "]");
    if (e < 1 || e > n)
      fail(where + "[" + std::to_string(i) + "]",
           "index " + std::to_string(e) + " outside 1.." + std::to_string(n));
    if (!indices.empty() && e <= indices.back())
      fail(where, "indices must be strictly increasing");
    indices.push_back(e);
  }
  return mask_from_indices(n, indices);
}

Capacity capacity_at(const Json& j, int n, const std::string& where) {
  const Json& entries = field(j, "entries", where);
  if (!entries.is_array()) fail(where + ".entries", "expected an array");
  std::map<SubsetMask, double> values;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string at = where + ".entries[" + std::to_string(i) + "]";
    const SubsetMask e = subset_at(field(entries[i], "set", at), n, at + ".set");
    const double v = number_at(field(entries[i], "value", at), at + ".value");
    if (!values.emplace(e, v).second) fail(at + ".set", "duplicate subset");
  }
  values.emplace(SubsetMask{0}, 0.0);  // the empty set may stay implicit
  try {
    return capacity_from_map(n, values);
  } catch (const std::invalid_argument& ex) {
    fail(where, ex.what());
  }
}

TableWeighting table_at(const Json& j, int n, const std::string& where) {
  TableWeighting t;
  auto hom = j.find("homogeneous");
  t.homogeneous = hom != j.end() && bool_at(*hom, where + ".homogeneous");
  const Json& entries = field(j, "entries", where);
  if (!entries.is_array()) fail(where + ".entries", "expected an array");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string at = where + ".entries[" + std::to_string(i) + "]";
    NNVector g = vector_at(field(entries[i], "vector", at), n, at + ".vector");
    const double v = number_at(field(entries[i], "value", at), at + ".value");
    if (!t.values.emplace(std::move(g), v).second) fail(at + ".vector", "duplicate vector");
  }
  return t;
}

ClosedFormWeighting closed_form_at(const Json& j, const std::string& where) {
  ClosedFormWeighting w;
  const std::string name = string_at(field(j, "name", where), where + ".name");
  if (name == "weighted_sum") {
    w.kind = ClosedFormKind::WeightedSum;
    w.weights = vector_at(field(j, "weights", where), 0, where + ".weights");
  } else if (name == "max_coord") {
    w.kind = ClosedFormKind::MaxCoord;
    auto s = j.find("scale");
    w.scale = s == j.end() ? 1.0 : number_at(*s, where + ".scale");
  } else if (name == "probabilistic_sum") {
    w.kind = ClosedFormKind::ProbabilisticSum;
  } else if (name == "product") {
    w.kind = ClosedFormKind::Product;
  } else if (name == "max_log") {
    w.kind = ClosedFormKind::MaxLog;
  } else if (name == "x_plus_sqrt_y") {
    w.kind = ClosedFormKind::XPlusSqrtY;
  } else {
    fail(where + ".name", "unknown closed form '" + name + "'");
  }
  return w;
}

LevelDependentCapacity slices_at(const Json& j, int n, const std::string& where) {
  LevelDependentCapacity lc;
  const Json& bp = field(j, "breakpoints", where);
  if (!bp.is_array()) fail(where + ".breakpoints", "expected an array of numbers");
  for (std::size_t i = 0; i < bp.size(); ++i)
    lc.breakpoints.push_back(number_at(bp[i], where + ".breakpoints[" + std::to_string(i) + "]"));
  auto fu = j.find("final_unbounded");
  lc.final_unbounded = fu == j.end() || bool_at(*fu, where + ".final_unbounded");
  const Json& slices = field(j, "slices", where);
  if (!slices.is_array()) fail(where + ".slices", "expected an array");
  for (std::size_t i = 0; i < slices.size(); ++i)
    lc.slices.push_back(capacity_at(slices[i], n, where + ".slices[" + std::to_string(i) + "]"));
  const ValidationReport vr = validate_level_capacity(lc);
  if (!vr.ok()) fail(where, vr.detail);
  return lc;
}

GeneratorSet generators_at(const Json& j, int n, const std::string& where) {
  int sources = 0;
  sources += j.contains("vectors");
  sources += j.contains("indicator");
  sources += j.contains("box");
  sources += j.contains("full_orthant");
  sources += j.contains("collections");
  if (sources != 1)
    fail(where,
         "expected exactly one of 'vectors', 'indicator', 'box', 'full_orthant', 'collections'");
  if (j.contains("vectors")) {
    const Json& vecs = j["vectors"];
    if (!vecs.is_array()) fail(where + ".vectors", "expected an array of vectors");
    ExplicitGenerators g;
    for (std::size_t i = 0; i < vecs.size(); ++i)
      g.vectors.push_back(vector_at(vecs[i], n, where + ".vectors[" + std::to_string(i) + "]"));
    return g;
  }
  if (j.contains("indicator")) {
    if (!bool_at(j["indicator"], where + ".indicator"))
      fail(where + ".indicator", "must be true when present");
    return IndicatorGenerators{};
  }
  if (j.contains("box")) {
    const Json& box = j["box"];
    BoxGridGenerators g;
    g.upper = vector_at(field(box, "upper", where + ".box"), n, where + ".box.upper");
    g.step = number_at(field(box, "step", where + ".box"), where + ".box.step");
    if (g.step <= 0.0) fail(where + ".box.step", "step must be positive");
    return g;
  }
  if (j.contains("full_orthant")) {
    if (!bool_at(j["full_orthant"], where + ".full_orthant"))
      fail(where + ".full_orthant", "must be true when present");
    return FullOrthant{};
  }
  const Json& colls = j["collections"];
  if (!colls.is_array()) fail(where + ".collections", "expected an array of collections");
  FixedCollections g;
  for (std::size_t i = 0; i < colls.size(); ++i) {
    const std::string at = where + ".collections[" + std::to_string(i) + "]";
    if (!colls[i].is_array()) fail(at, "expected an array of vectors");
    std::vector<NNVector> members;
    for (std::size_t k = 0; k < colls[i].size(); ++k)
      members.push_back(vector_at(colls[i][k], n, at + "[" + std::to_string(k) + "]"));
    g.collections.push_back(std::move(members));
  }
  return g;
}

CoeffDomain coeff_domain_at(const Json& j, const std::string& where) {
  const std::string s = string_at(j, where);
  if (s == "real") return CoeffDomain::NonNegReal;
  if (s == "int") return CoeffDomain::NonNegInt;
  if (s == "unit") return CoeffDomain::UnitCoeff;
  fail(where, "unknown coefficient domain '" + s + "' (want real, int, or unit)");
}

CollectionConstraint constraint_at(const Json& j, const std::string& where) {
  const std::string kind = string_at(field(j, "kind", where), where + ".kind");
  if (kind == "any") return CollectionConstraint::any();
  if (kind == "chain") return CollectionConstraint::chain();
  if (kind == "partition") return CollectionConstraint::partition();
  if (kind == "comonotone") return CollectionConstraint::comonotone();
  const bool disjoint = kind == "disjoint_support";
  if (!disjoint && kind != "max_parts") fail(where + ".kind", "unknown constraint '" + kind + "'");
  const int k = int_at(field(j, "k", where), where + ".k");
  if (k < 1) fail(where + ".k", "k must be at least 1");
  return disjoint ? CollectionConstraint::disjoint_support(k) : CollectionConstraint::max_parts(k);
}

DecompSystem system_at(const Json& j, int n, const std::string& where) {
  DecompSystem sys;
  sys.n = n;
  sys.generators = generators_at(field(j, "generators", where), n, where + ".generators");
  auto cd = j.find("coeff_domain");
  sys.coeff_domain =
      cd == j.end() ? CoeffDomain::NonNegReal : coeff_domain_at(*cd, where + ".coeff_domain");
  auto c = j.find("constraint");
  sys.constraint =
      c == j.end() ? CollectionConstraint::any() : constraint_at(*c, where + ".constraint");
  return sys;
}

// ---------------------------------------------------------------------------
// Serialization.  Every number goes through Json(double) so integers render
// as decimal literals and the canonical form survives a parse round-trip.

Json json_vector(const NNVector& x) {
  Json a = Json::array();
  for (double v : x) a.push_back(static_cast<double>(v));
  return a;
}

Json json_subset(SubsetMask e) {
  Json a = Json::array();
  for (int i : mask_to_indices(e)) a.push_back(i);
  return a;
}

Json json_capacity(const Capacity& m) {
  Json entries = Json::array();
  for (SubsetMask e = 1; e <= m.full_mask(); ++e) {
    Json row;
    row["set"] = json_subset(e);
    row["value"] = static_cast<double>(m.at(e));
    entries.push_back(std::move(row));
  }
  Json j;
  j["entries"] = std::move(entries);
  return j;
}

// Fills the single weighting-source key of `out`.
void json_weighting(const Weighting& w, Json* out) {
  if (const auto* t = std::get_if<TableWeighting>(&w)) {
    Json entries = Json::array();
    for (const auto& [g, v] : t->values) {
      Json row;
      row["vector"] = json_vector(g);
      row["value"] = static_cast<double>(v);
      entries.push_back(std::move(row));
    }
    Json j;
    j["homogeneous"] = t->homogeneous;
    j["entries"] = std::move(entries);
    (*out)["table"] = std::move(j);
  } else if (const auto* c = std::get_if<CapacityWeighting>(&w)) {
    (*out)["capacity"] = json_capacity(c->capacity);
  } else if (const auto* cm = std::get_if<CapacityMinWeighting>(&w)) {
    (*out)["capacity_min"] = json_capacity(cm->capacity);
  } else {
    const auto& cf = std::get<ClosedFormWeighting>(w);
    Json j;
    switch (cf.kind) {
      case ClosedFormKind::WeightedSum:
        j["name"] = "weighted_sum";
        j["weights"] = json_vector(cf.weights);
        break;
      case ClosedFormKind::MaxCoord:
        j["name"] = "max_coord";
        j["scale"] = static_cast<double>(cf.scale);
        break;
      case ClosedFormKind::ProbabilisticSum:
        j["name"] = "probabilistic_sum";
        break;
      case ClosedFormKind::Product:
        j["name"] = "product";
        break;
      case ClosedFormKind::MaxLog:
        j["name"] = "max_log";
        break;
      case ClosedFormKind::XPlusSqrtY:
        j["name"] = "x_plus_sqrt_y";
        break;
    }
    (*out)["closed_form"] = std::move(j);
  }
}

Json json_system(const DecompSystem& sys) {
  Json j;
  Json gens;
  if (const auto* eg = std::get_if<ExplicitGenerators>(&sys.generators)) {
    Json vecs = Json::array();
    for (const NNVector& g : eg->vectors) vecs.push_back(json_vector(g));
    gens["vectors"] = std::move(vecs);
  } else if (std::holds_alternative<IndicatorGenerators>(sys.generators)) {
    gens["indicator"] = true;
  } else if (const auto* bg = std::get_if<BoxGridGenerators>(&sys.generators)) {
    Json box;
    box["upper"] = json_vector(bg->upper);
    box["step"] = static_cast<double>(bg->step);
    gens["box"] = std::move(box);
  } else if (std::holds_alternative<FullOrthant>(sys.generators)) {
    gens["full_orthant"] = true;
  } else {
    const auto& fc = std::get<FixedCollections>(sys.generators);
    Json colls = Json::array();
    for (const auto& members : fc.collections) {
      Json coll = Json::array();
      for (const NNVector& g : members) coll.push_back(json_vector(g));
      colls.push_back(std::move(coll));
    }
    gens["collections"] = std::move(colls);
  }
  j["generators"] = std::move(gens);
  switch (sys.coeff_domain) {
    case CoeffDomain::NonNegReal:
      j["coeff_domain"] = "real";
      break;
    case CoeffDomain::NonNegInt:
      j["coeff_domain"] = "int";
      break;
    case CoeffDomain::UnitCoeff:
      j["coeff_domain"] = "unit";
      break;
  }
  Json constraint;
  switch (sys.constraint.kind) {
    case CollectionConstraint::Kind::Any:
      constraint["kind"] = "any";
      break;
    case CollectionConstraint::Kind::Chain:
      constraint["kind"] = "chain";
      break;
    case CollectionConstraint::Kind::Partition:
      constraint["kind"] = "partition";
      break;
    case CollectionConstraint::Kind::DisjointSupport:
      constraint["kind"] = "disjoint_support";
      constraint["k"] = sys.constraint.k;
      break;
    case CollectionConstraint::Kind::Comonotone:
      constraint["kind"] = "comonotone";
      break;
    case CollectionConstraint::Kind::MaxParts:
      constraint["kind"] = "max_parts";
      constraint["k"] = sys.constraint.k;
      break;
  }
  j["constraint"] = std::move(constraint);
  return j;
}

}  // namespace

bool known_mode(const std::string& mode) {
  static const std::set<std::string> plain = {"sub", "super", "oracle", "maxpseudo"};
  static const std::set<std::string> classical = {"choquet", "shilkret", "sugeno", "pan",
                                                  "concave", "convex",   "level"};
  static const std::set<std::string> suites = {"monotonicity",
                                               "dominance",
                                               "comonotone-superadditivity",
                                               "disjoint-superadditivity",
                                               "oracle-equivalence",
                                               "frank"};
  if (plain.count(mode)) return true;
  if (mode.rfind("classical:", 0) == 0) return classical.count(mode.substr(10)) > 0;
  if (mode.rfind("check:", 0) == 0) return suites.count(mode.substr(6)) > 0;
  return false;
}

ProblemFile parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& ex) {
    throw std::runtime_error(std::string("problem file: not valid JSON: ") + ex.what());
  }
  if (!j.is_object()) fail("$", "top level must be an object");

  ProblemFile p;
  p.version = string_at(field(j, "version", "$"), "version");
  if (p.version != "decompint/1") fail("version", "unsupported version '" + p.version + "'");
  p.n = int_at(field(j, "n", "$"), "n");
  if (p.n < 1 || p.n > 20) fail("n", "ground set size must lie in 1..20");
  p.mode = string_at(field(j, "mode", "$"), "mode");
  if (!known_mode(p.mode)) fail("mode", "unknown mode '" + p.mode + "'");

  int sources = 0;
  if (j.contains("capacity")) {
    p.weighting = CapacityWeighting{capacity_at(j["capacity"], p.n, "capacity")};
    ++sources;
  }
  if (j.contains("capacity_min")) {
    p.weighting = CapacityMinWeighting{capacity_at(j["capacity_min"], p.n, "capacity_min")};
    ++sources;
  }
  if (j.contains("table")) {
    p.weighting = table_at(j["table"], p.n, "table");
    ++sources;
  }
  if (j.contains("closed_form")) {
    p.weighting = closed_form_at(j["closed_form"], "closed_form");
    ++sources;
  }
  if (j.contains("capacity_slices")) {
    p.capacity_slices = slices_at(j["capacity_slices"], p.n, "capacity_slices");
    ++sources;
  }
  if (sources != 1)
    fail("$",
         "expected exactly one weighting source among 'capacity', 'capacity_min', 'table', "
         "'closed_form', 'capacity_slices'");

  if (j.contains("system")) p.system = system_at(j["system"], p.n, "system");

  const Json& queries = field(j, "queries", "$");
  if (!queries.is_array()) fail("queries", "expected an array of vectors");
  for (std::size_t i = 0; i < queries.size(); ++i)
    p.queries.push_back(vector_at(queries[i], p.n, "queries[" + std::to_string(i) + "]"));
  return p;
}

std::string serialize_problem(const ProblemFile& p) {
  Json j;
  j["version"] = p.version;
  j["n"] = p.n;
  j["mode"] = p.mode;
  if (p.weighting) json_weighting(*p.weighting, &j);
  if (p.capacity_slices) {
    Json slices;
    slices["breakpoints"] = json_vector(p.capacity_slices->breakpoints);
    slices["final_unbounded"] = p.capacity_slices->final_unbounded;
    Json arr = Json::array();
    for (const Capacity& m : p.capacity_slices->slices) arr.push_back(json_capacity(m));
    slices["slices"] = std::move(arr);
    j["capacity_slices"] = std::move(slices);
  }
  if (p.system) j["system"] = json_system(*p.system);
  Json queries = Json::array();
  for (const NNVector& x : p.queries) queries.push_back(json_vector(x));
  j["queries"] = std::move(queries);
  return j.dump(2) + "\n";
}

ProblemFile load_problem(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("problem file: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_problem(text);
}

Base problem_base(const ProblemFile& p) {
  if (!p.system) throw std::runtime_error("problem file: mode '" + p.mode + "' needs a system");
  if (!p.weighting)
    throw std::runtime_error("problem file: mode '" + p.mode + "' needs a weighting source");
  return Base{*p.system, *p.weighting};
}

const Capacity& problem_capacity(const ProblemFile& p) {
  if (p.weighting) {
    if (const auto* c = std::get_if<CapacityWeighting>(&*p.weighting)) return c->capacity;
    if (const auto* cm = std::get_if<CapacityMinWeighting>(&*p.weighting)) return cm->capacity;
  }
  throw std::runtime_error("problem file: mode '" + p.mode + "' needs a capacity source");
}

}  // namespace decompint
