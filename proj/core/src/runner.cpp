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

#include "decompint/runner.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "decompint/checks.hpp"
#include "decompint/classical.hpp"
#include "decompint/decomp.hpp"
#include "decompint/oracle.hpp"
#include "json.hpp"

namespace decompint {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SolverOptions solver_options(const RunFlags& f) {
  SolverOptions o;
  if (f.grid_step > 0.0) o.grid_step = f.grid_step;
  if (f.max_parts > 0) o.max_parts = f.max_parts;
  if (f.node_budget > 0) o.node_budget = f.node_budget;
  return o;
}

const char* status_name(IntegralStatus s) {
  switch (s) {
    case IntegralStatus::Exact:
      return "exact";
    case IntegralStatus::Approximate:
      return "approximate";
    case IntegralStatus::Unbounded:
      return "unbounded";
    case IntegralStatus::InfeasibleDomain:
      return "infeasible";
  }
  return "unknown";
}

Json json_vector(const NNVector& x) {
  Json a = Json::array();
  for (double v : x) a.push_back(static_cast<double>(v));
  return a;
}

Json json_witness(const std::vector<WitnessPart>& witness) {
  Json a = Json::array();
  for (const WitnessPart& part : witness) {
    Json row;
    row["vector"] = json_vector(part.vector);
    row["coeff"] = static_cast<double>(part.coeff);
    a.push_back(std::move(row));
  }
  return a;
}

/// One solved query in the result document.
Json json_record(const NNVector& x, const IntegralResult& r, double wall) {
  Json row;
  row["query"] = json_vector(x);
  row["status"] = status_name(r.status);
  row["value"] = static_cast<double>(r.value);
  row["error_bound"] = static_cast<double>(r.error_bound);
  row["witness"] = json_witness(r.witness);
  row["wall_seconds"] = wall;
  return row;
}

std::vector<WitnessPart> indicator_witness(
    int n, const std::vector<std::pair<SubsetMask, double>>& parts) {
  std::vector<WitnessPart> witness;
  for (const auto& [e, c] : parts)
    if (c > kEps) witness.push_back({indicator(n, e), c});
  return witness;
}

/// The classical integrals as (value, witness) pairs; Shilkret's optimum is
/// itself a one-member decomposition, Sugeno's clipped optimum is not.
IntegralResult classical_result(const std::string& name, const ProblemFile& p, const NNVector& x,
                                const RunFlags& flags) {
  IntegralResult r;
  if (name == "level") {
    if (!p.capacity_slices)
      throw std::runtime_error("problem file: classical:level needs 'capacity_slices'");
    if (p.capacity_slices->slices.empty() ||
        static_cast<int>(x.size()) != p.capacity_slices->slices.front().ground_size())
      throw std::runtime_error("query arity does not match the capacity slices");
    r.value = level_dependent_choquet(*p.capacity_slices, x);
    return r;
  }
  const Capacity& m = problem_capacity(p);
  const int n = m.ground_size();
  if (static_cast<int>(x.size()) != n)
    throw std::runtime_error("query arity does not match the capacity");
  if (name == "choquet") {
    r.value = choquet(m, x);
    r.witness = indicator_witness(n, choquet_chain(m, x));
  } else if (name == "pan") {
    r.value = pan(m, x);
    r.witness = indicator_witness(n, pan_partition(m, x));
  } else if (name == "shilkret") {
    r.value = shilkret(m, x);
    for (SubsetMask e = 1; e <= m.full_mask() && r.witness.empty(); ++e) {
      double lo = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i)
        if (e & (SubsetMask{1} << i)) lo = std::min(lo, x[i]);
      if (std::abs(m.at(e) * lo - r.value) <= kWitnessTol && r.value > kEps)
        r.witness = {{indicator(n, e), lo}};
    }
  } else if (name == "sugeno") {
    r.value = sugeno(m, x);
  } else if (name == "concave") {
    LPOptions lpo;
    if (flags.node_budget > 0) lpo.node_budget = flags.node_budget;
    r.value = concave(m, x, lpo);
  } else if (name == "convex") {
    LPOptions lpo;
    if (flags.node_budget > 0) lpo.node_budget = flags.node_budget;
    r.value = convex(m, x, lpo);
  } else {
    throw std::runtime_error("unknown classical integral '" + name + "'");
  }
  return r;
}

Json oracle_side(const Base& b, const NNVector& x, bool super, const OracleOptions& oo,
                 bool* refused) {
  Json side;
  try {
    const OracleResult r = super ? brute_super(b, x, oo) : brute_sub(b, x, oo);
    side["feasible"] = r.feasible;
    side["value"] = static_cast<double>(r.value);
    side["nodes"] = r.nodes;
    side["witness"] = json_witness(r.collection);
    if (!r.feasible) *refused = true;  // infeasible cover maps to exit code 2
  } catch (const OracleRefusal& ex) {
    side["refused"] = std::string(ex.what());
    *refused = true;
  }
  return side;
}

IntegralResult dispatch_integral(const std::string& mode, const ProblemFile& p, const NNVector& x,
                                 const RunFlags& flags) {
  if (mode.rfind("classical:", 0) == 0) return classical_result(mode.substr(10), p, x, flags);
  const Base b = problem_base(p);
  const SolverOptions opts = solver_options(flags);
  if (mode == "sub") return sub_integral(b, x, opts);
  if (mode == "super") return super_integral(b, x, opts);
  if (mode == "maxpseudo") return max_pseudo_integral(b, x, opts);
  throw std::runtime_error("mode '" + mode + "' does not solve single queries");
}

std::string resolved_mode(const ProblemFile& p, const RunFlags& flags) {
  const std::string mode = flags.mode.empty() ? p.mode : flags.mode;
  if (!known_mode(mode)) throw std::runtime_error("unknown mode '" + mode + "'");
  return mode;
}

}  // namespace

RunOutcome run_problem(const ProblemFile& p, const RunFlags& flags) {
  const std::string mode = resolved_mode(p, flags);
  Json doc;
  doc["version"] = p.version;
  doc["mode"] = mode;
  int exit_code = 0;

  if (mode.rfind("check:", 0) == 0) {
    const SuiteReport r = run_suite(mode.substr(6), flags.seed, flags.size, flags.tolerance);
    Json suite;
    suite["name"] = r.suite;
    suite["total"] = r.total;
    suite["passed"] = r.passed;
    suite["max_residual"] = r.max_residual;
    suite["first_counterexample"] = r.first_counterexample;
    doc["suite"] = std::move(suite);
    exit_code = r.ok() ? 0 : 2;
  } else if (mode == "oracle") {
    const Base b = problem_base(p);
    OracleOptions oo;
    if (flags.node_budget > 0) oo.space_limit = flags.node_budget;
    Json results = Json::array();
    for (const NNVector& x : p.queries) {
      const Clock::time_point t0 = Clock::now();
      bool refused = false;
      Json row;
      row["query"] = json_vector(x);
      row["sub"] = oracle_side(b, x, false, oo, &refused);
      row["super"] = oracle_side(b, x, true, oo, &refused);
      row["wall_seconds"] = seconds_since(t0);
      results.push_back(std::move(row));
      if (refused) exit_code = 2;
    }
    doc["results"] = std::move(results);
  } else {
    Json results = Json::array();
    for (const NNVector& x : p.queries) {
      const Clock::time_point t0 = Clock::now();
      const IntegralResult r = dispatch_integral(mode, p, x, flags);
      results.push_back(json_record(x, r, seconds_since(t0)));
      if (r.status == IntegralStatus::Unbounded || r.status == IntegralStatus::InfeasibleDomain)
        exit_code = 2;
    }
    doc["results"] = std::move(results);
  }
  return {doc.dump(2) + "\n", exit_code};
}

std::string explain_query(const ProblemFile& p, const NNVector& query, const RunFlags& flags) {
  const std::string mode = resolved_mode(p, flags);
  if (mode == "oracle" || mode.rfind("check:", 0) == 0)
    throw std::runtime_error("mode '" + mode + "' has no single-query explanation");
  const IntegralResult r = dispatch_integral(mode, p, query, flags);

  std::ostringstream out;
  out << "query " << format_vector(query) << " [" << mode << "]\n";
  if (r.status != IntegralStatus::Exact) {
    out << "status " << status_name(r.status) << "; value " << r.value;
    if (r.status == IntegralStatus::Approximate) out << " (error bound " << r.error_bound << ")";
    out << "\n";
    return out.str();
  }

  const bool real_coeffs =
      p.system && p.system->coeff_domain == CoeffDomain::NonNegReal;
  NNVector sum(query.size(), 0.0);
  double total = 0.0;
  for (const WitnessPart& part : r.witness) {
    NNVector member = part.vector;
    double value = 0.0;
    if (real_coeffs || !p.system) {
      for (double& v : member) v *= part.coeff;  // the member itself is scaled
      if (p.weighting) {
        const auto direct = evaluate(*p.weighting, member);
        const auto unscaled = evaluate(*p.weighting, part.vector);
        value = direct ? *direct : part.coeff * (unscaled ? *unscaled : 0.0);
      }
      out << "  A" << format_vector(member) << " = " << value << "\n";
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += member[i];
    } else {
      if (p.weighting) {
        const auto v = evaluate(*p.weighting, member);
        value = part.coeff * (v ? *v : 0.0);
      }
      if (std::abs(part.coeff - 1.0) <= kEps)
        out << "  A" << format_vector(member) << " = " << value << "\n";
      else
        out << "  " << part.coeff << " x A" << format_vector(member) << " = " << value << "\n";
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += part.coeff * member[i];
    }
    total += value;
  }
  if (r.witness.empty()) out << "  (empty decomposition)\n";
  out << "total = " << total << "\n";
  NNVector slack(query.size(), 0.0);
  const bool super = mode == "super";
  for (std::size_t i = 0; i < slack.size(); ++i)
    slack[i] = super ? sum[i] - query[i] : query[i] - sum[i];
  out << (super ? "surplus = " : "slack = ") << format_vector(slack) << "\n";
  return out.str();
}

}  // namespace decompint
