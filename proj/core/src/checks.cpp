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

#include "decompint/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "decompint/classical.hpp"
#include "decompint/decomp.hpp"
#include "decompint/oracle.hpp"

namespace decompint {
namespace {

// Drawing directly from the raw engine keeps the suites bit-reproducible
// across standard libraries; the distribution adaptors are not pinned by the
// standard, the generator itself is.
double unit_real(std::mt19937& rng) {
  return static_cast<double>(rng()) * (1.0 / 4294967296.0);
}

int rand_int(std::mt19937& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

NNVector random_vector(std::mt19937& rng, int n, double hi) {
  NNVector x(n);
  for (double& v : x) v = round2(hi * unit_real(rng));
  return x;
}

NNVector random_int_vector(std::mt19937& rng, int n, int hi) {
  NNVector x(n);
  for (double& v : x) v = rand_int(rng, 0, hi);
  return x;
}

std::vector<int> random_permutation(std::mt19937& rng, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rand_int(rng, 0, i)]);
  return perm;
}

/// Strictly monotone capacity: each set exceeds all its one-smaller subsets
/// by a positive margin.
Capacity random_capacity(std::mt19937& rng, int n) {
  std::vector<double> vals(std::size_t{1} << n, 0.0);
  const SubsetMask full = (SubsetMask{1} << n) - 1;
  for (SubsetMask e = 1; e <= full; ++e) {
    double base = 0.0;
    for (int i = 0; i < n; ++i)
      if (e & (SubsetMask{1} << i)) base = std::max(base, vals[e & ~(SubsetMask{1} << i)]);
    vals[e] = base + 0.05 + 0.95 * unit_real(rng);
  }
  return Capacity(n, std::move(vals));
}

/// Small integer-entry base with a non-homogeneous table: the shape the
/// generic integer solvers and the brute oracle both handle exactly.
Base random_int_base(std::mt19937& rng, int* n_out) {
  const int n = rand_int(rng, 2, 4);
  const int m = rand_int(rng, 1, 6);
  Base b;
  b.system.n = n;
  b.system.coeff_domain = rand_int(rng, 0, 1) ? CoeffDomain::NonNegInt : CoeffDomain::UnitCoeff;
  ExplicitGenerators gens;
  TableWeighting table;
  for (int j = 0; j < m; ++j) {
    NNVector g(n);
    do {
      for (double& v : g) v = rand_int(rng, 0, 2);
    } while (support_mask(g) == 0);
    if (table.values.count(g)) continue;  // duplicates add nothing
    table.values.emplace(g, round2(0.1 + 4.9 * unit_real(rng)));
    gens.vectors.push_back(std::move(g));
  }
  b.system.generators = std::move(gens);
  b.weighting = std::move(table);
  if (n_out) *n_out = n;
  return b;
}

struct Judge {
  SuiteReport report;
  double tolerance;

  Judge(std::string suite, double tol) : tolerance(tol) { report.suite = std::move(suite); }

  void record(double residual, const std::string& detail) {
    ++report.total;
    report.max_residual = std::max(report.max_residual, residual);
    if (residual <= tolerance) {
      ++report.passed;
    } else if (report.first_counterexample.empty()) {
      std::ostringstream ss;
      ss << "instance " << report.total << ": " << detail << " (residual " << residual << ")";
      report.first_counterexample = ss.str();
    }
  }
};

SuiteReport suite_monotonicity(unsigned seed, int size, double tol) {
  std::mt19937 rng(seed);
  Judge judge("monotonicity", tol > 0 ? tol : 1e-9);
  for (int t = 0; t < size; ++t) {
    Base b;
    NNVector x, y;
    if (t % 2 == 0) {
      const int n = rand_int(rng, 2, 4);
      b.system.n = n;
      b.system.generators = IndicatorGenerators{};
      b.system.coeff_domain = CoeffDomain::NonNegReal;
      b.weighting = CapacityWeighting{random_capacity(rng, n)};
      x = random_vector(rng, n, 3.0);
      y = x;
      for (double& v : y) v += round2(2.0 * unit_real(rng));
    } else {
      int n = 0;
      b = random_int_base(rng, &n);
      x = random_int_vector(rng, n, 5);
      y = x;
      for (double& v : y) v += rand_int(rng, 0, 2);
    }
    const IntegralResult rx = sub_integral(b, x);
    const IntegralResult ry = sub_integral(b, y);
    judge.record(std::max(0.0, rx.value - ry.value),
                 "I" + format_vector(x) + "=" + std::to_string(rx.value) + " > I" +
                     format_vector(y) + "=" + std::to_string(ry.value));
  }
  return judge.report;
}

SuiteReport suite_dominance(unsigned seed, int size, double tol) {
  std::mt19937 rng(seed);
  Judge judge("dominance", tol > 0 ? tol : 1e-9);
  for (int t = 0; t < size; ++t) {
    double lo = 0.0, hi = 0.0;
    NNVector x;
    if (t % 2 == 0) {
      const int n = rand_int(rng, 2, 4);
      const Capacity small = random_capacity(rng, n);
      const Capacity bump = random_capacity(rng, n);
      std::vector<double> vals = small.values();
      for (std::size_t e = 0; e < vals.size(); ++e) vals[e] += 0.5 * bump.values()[e];
      const Capacity large(n, std::move(vals));
      x = random_vector(rng, n, 3.0);
      lo = concave(small, x);
      hi = concave(large, x);
    } else {
      int n = 0;
      Base b = random_int_base(rng, &n);
      x = random_int_vector(rng, n, 5);
      lo = sub_integral(b, x).value;
      auto& table = std::get<TableWeighting>(b.weighting);
      for (auto& [g, v] : table.values) v = round2(v + 0.01 + unit_real(rng));
      hi = sub_integral(b, x).value;
    }
    judge.record(std::max(0.0, lo - hi), "I_small" + format_vector(x) + "=" +
                                             std::to_string(lo) + " > I_large=" +
                                             std::to_string(hi));
  }
  return judge.report;
}

/// Two vectors that are nondecreasing along one shared coordinate order are
/// comonotone, and so is their sum.
void comonotone_pair(std::mt19937& rng, int n, NNVector* x, NNVector* y) {
  const std::vector<int> perm = random_permutation(rng, n);
  NNVector a = random_vector(rng, n, 2.0), b = random_vector(rng, n, 2.0);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  x->assign(n, 0.0);
  y->assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    (*x)[perm[k]] = a[k];
    (*y)[perm[k]] = b[k];
  }
}

SuiteReport suite_comonotone(unsigned seed, int size, double tol) {
  std::mt19937 rng(seed);
  Judge judge("comonotone-superadditivity", tol > 0 ? tol : 1e-9);
  for (int t = 0; t < size; ++t) {
    const int n = rand_int(rng, 2, 4);
    const Capacity m = random_capacity(rng, n);
    NNVector x, y;
    comonotone_pair(rng, n, &x, &y);
    NNVector sum(n);
    for (int i = 0; i < n; ++i) sum[i] = x[i] + y[i];
    const Weighting w = CapacityWeighting{m};
    const double ix = comonotone_integral(w, x, 1.0 / 64).value;
    const double iy = comonotone_integral(w, y, 1.0 / 64).value;
    const double ixy = comonotone_integral(w, sum, 1.0 / 64).value;
    const double super_defect = std::max(0.0, ix + iy - ixy);
    // The chain reduction makes the integral agree with the sort formula,
    // which is additive on comonotone pairs: check both directions.
    const double additivity =
        std::abs(choquet(m, x) + choquet(m, y) - choquet(m, sum));
    judge.record(std::max(super_defect, additivity),
                 "x=" + format_vector(x) + " y=" + format_vector(y));
  }
  return judge.report;
}

SuiteReport suite_disjoint(unsigned seed, int size, double tol) {
  std::mt19937 rng(seed);
  Judge judge("disjoint-superadditivity", tol > 0 ? tol : 1e-9);
  for (int t = 0; t < size; ++t) {
    const int n = rand_int(rng, 3, 5);
    const Capacity m = random_capacity(rng, n);
    // Split the ground set; x lives on one side, y on the other.
    NNVector x(n, 0.0), y(n, 0.0);
    bool saw_x = false, saw_y = false;
    for (int i = 0; i < n; ++i) {
      if (rand_int(rng, 0, 1)) {
        x[i] = round2(0.1 + 2.9 * unit_real(rng));
        saw_x = true;
      } else {
        y[i] = round2(0.1 + 2.9 * unit_real(rng));
        saw_y = true;
      }
    }
    if (!saw_x) {  // move one coordinate across so the supports stay disjoint
      x[0] = y[0];
      y[0] = 0.0;
    }
    if (!saw_y) {
      y[n - 1] = x[n - 1];
      x[n - 1] = 0.0;
    }
    NNVector sum(n);
    for (int i = 0; i < n; ++i) sum[i] = x[i] + y[i];
    const Weighting w = CapacityWeighting{m};
    const double ix = disjoint_support_integral(w, x, n).value;
    const double iy = disjoint_support_integral(w, y, n).value;
    const double ixy = disjoint_support_integral(w, sum, n).value;
    judge.record(std::max(0.0, ix + iy - ixy),
                 "x=" + format_vector(x) + " y=" + format_vector(y));
  }
  return judge.report;
}

SuiteReport suite_oracle_equivalence(unsigned seed, int size, double tol) {
  std::mt19937 rng(seed);
  Judge judge("oracle-equivalence", tol > 0 ? tol : 1e-7);
  for (int t = 0; t < size; ++t) {
    int n = 0;
    const Base b = random_int_base(rng, &n);
    const NNVector x = random_int_vector(rng, n, 6);
    double residual = 0.0;
    std::string detail = "x=" + format_vector(x);

    const IntegralResult sub = sub_integral(b, x);
    const OracleResult bsub = brute_sub(b, x);
    residual = std::abs(sub.value - bsub.value);
    if (sub.status != IntegralStatus::Exact || !verify_witness(b, x, sub, false)) {
      residual = 1.0;
      detail += "; sub witness rejected";
    }

    const IntegralResult sup = super_integral(b, x);
    const OracleResult bsup = brute_super(b, x);
    const bool engine_feasible = sup.status != IntegralStatus::InfeasibleDomain;
    if (engine_feasible != bsup.feasible) {
      residual = 1.0;
      detail += "; feasibility disagreement";
    } else if (bsup.feasible) {
      residual = std::max(residual, std::abs(sup.value - bsup.value));
      if (sup.status != IntegralStatus::Exact || !verify_witness(b, x, sup, true)) {
        residual = 1.0;
        detail += "; super witness rejected";
      }
    }
    judge.record(residual, detail);
  }
  return judge.report;
}

SuiteReport suite_frank(unsigned seed, int size, double tol) {
  std::mt19937 rng(seed);
  const double step = 1.0 / 64;
  std::vector<NNVector> samples;
  samples.reserve(size);
  for (int t = 0; t < size; ++t)
    samples.push_back({rand_int(rng, 0, 64) * step, rand_int(rng, 0, 64) * step});
  const FrankReport fr = frank_check(ClosedFormWeighting{ClosedFormKind::ProbabilisticSum, {}, 1.0},
                                     ClosedFormWeighting{ClosedFormKind::Product, {}, 1.0},
                                     samples, step);
  Judge judge("frank", tol > 0 ? tol : 0.05);
  for (const FrankReport::Row& row : fr.rows)
    judge.record(std::abs(row.residual),
                 "point " + format_vector(row.point) + ": super=" +
                     std::to_string(row.super_value) + " sub=" + std::to_string(row.sub_value));
  return judge.report;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"monotonicity",         "dominance",          "comonotone-superadditivity",
          "disjoint-superadditivity", "oracle-equivalence", "frank"};
}

SuiteReport run_suite(const std::string& suite, unsigned seed, int size, double tolerance) {
  if (suite == "monotonicity") return suite_monotonicity(seed, size > 0 ? size : 200, tolerance);
  if (suite == "dominance") return suite_dominance(seed, size > 0 ? size : 100, tolerance);
  if (suite == "comonotone-superadditivity")
    return suite_comonotone(seed, size > 0 ? size : 100, tolerance);
  if (suite == "disjoint-superadditivity")
    return suite_disjoint(seed, size > 0 ? size : 100, tolerance);
  if (suite == "oracle-equivalence")
    return suite_oracle_equivalence(seed, size > 0 ? size : 50, tolerance);
  if (suite == "frank") return suite_frank(seed, size > 0 ? size : 50, tolerance);
  throw std::runtime_error("unknown check suite '" + suite + "'");
}

}  // namespace decompint
