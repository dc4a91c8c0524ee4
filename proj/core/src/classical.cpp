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

#include "decompint/classical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace decompint {
namespace {

void check_arity(const Capacity& m, const NNVector& x) {
  if (int(x.size()) != m.ground_size())
    throw std::invalid_argument("integral: vector arity differs from capacity arity");
}

// min_{i in E} x_i for every nonempty E, via lowest-bit recursion.
std::vector<double> min_over_subsets(const NNVector& x) {
  const std::size_t size = std::size_t(1) << x.size();
  std::vector<double> minx(size, std::numeric_limits<double>::infinity());
  for (SubsetMask e = 1; e < size; ++e) {
    const int low = std::countr_zero(e);
    const SubsetMask rest = e & (e - 1);
    minx[e] = rest ? std::min(minx[rest], x[low]) : x[low];
  }
  return minx;
}

LinearProgram subset_lp(const Capacity& m, const NNVector& x, bool lower) {
  const int n = m.ground_size();
  if (n > 16) throw std::length_error("subset LP limited to n <= 16");
  const SubsetMask full = m.full_mask();
  LinearProgram lp;
  lp.maximize = lower;  // concave maximizes, convex minimizes
  lp.objective.resize(full);
  for (SubsetMask e = 1; e <= full; ++e) lp.objective[e - 1] = m.at(e);
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(full, 0.0);
    for (SubsetMask e = 1; e <= full; ++e)
      if (e & (SubsetMask(1) << i)) row[e - 1] = 1.0;
    lp.add_row(std::move(row), lower ? ConstraintSense::LessEq : ConstraintSense::GreaterEq, x[i]);
  }
  return lp;
}

}  // namespace

double choquet(const Capacity& m, const NNVector& x) {
  double v = 0.0;
  for (const auto& [set, coeff] : choquet_chain(m, x)) v += coeff * m.at(set);
  return v;
}

std::vector<std::pair<SubsetMask, double>> choquet_chain(const Capacity& m, const NNVector& x) {
  check_arity(m, x);
  const int n = m.ground_size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });
  std::vector<std::pair<SubsetMask, double>> parts;
  SubsetMask level = m.full_mask();
  double prev = 0.0;
  for (int r = 0; r < n; ++r) {
    const double step = x[order[r]] - prev;
    if (step > kEps) parts.emplace_back(level, step);
    prev = x[order[r]];
    level &= ~(SubsetMask(1) << order[r]);
  }
  return parts;
}

double shilkret(const Capacity& m, const NNVector& x) {
  check_arity(m, x);
  const auto minx = min_over_subsets(x);
  double best = 0.0;
  for (SubsetMask e = 1; e <= m.full_mask(); ++e) best = std::max(best, m.at(e) * minx[e]);
  return best;
}

double sugeno(const Capacity& m, const NNVector& x) {
  check_arity(m, x);
  const auto minx = min_over_subsets(x);
  double best = 0.0;
  for (SubsetMask e = 1; e <= m.full_mask(); ++e)
    best = std::max(best, std::min(minx[e], m.at(e)));
  return best;
}

double pan(const Capacity& m, const NNVector& x) {
  double v = 0.0;
  for (const auto& [set, coeff] : pan_partition(m, x)) v += coeff * m.at(set);
  return v;
}

std::vector<std::pair<SubsetMask, double>> pan_partition(const Capacity& m, const NNVector& x) {
  check_arity(m, x);
  const SubsetMask full = m.full_mask();
  const auto minx = min_over_subsets(x);
  std::vector<double> f(std::size_t(full) + 1, 0.0);
  std::vector<SubsetMask> pick(std::size_t(full) + 1, 0);
  for (SubsetMask s = 1; s <= full; ++s) {
    for (SubsetMask t = s; t; t = (t - 1) & s) {
      const double cand = f[s & ~t] + m.at(t) * minx[t];
      if (cand > f[s] + kEps) {
        f[s] = cand;
        pick[s] = t;
      }
    }
  }
  std::vector<std::pair<SubsetMask, double>> blocks;
  for (SubsetMask s = full; s && pick[s];) {
    const SubsetMask t = pick[s];
    blocks.emplace_back(t, minx[t]);
    s &= ~t;
  }
  return blocks;
}

double concave(const Capacity& m, const NNVector& x, const LPOptions& opts) {
  check_arity(m, x);
  auto sol = simplex_solve(subset_lp(m, x, true), opts);
  if (sol.status != LPStatus::Optimal) throw std::runtime_error("concave integral LP failed");
  return sol.value;
}

double convex(const Capacity& m, const NNVector& x, const LPOptions& opts) {
  check_arity(m, x);
  auto sol = simplex_solve(subset_lp(m, x, false), opts);
  if (sol.status == LPStatus::Infeasible)
    throw std::runtime_error("convex integral LP infeasible");
  if (sol.status != LPStatus::Optimal) throw std::runtime_error("convex integral LP failed");
  return sol.value;
}

ValidationReport validate_level_capacity(const LevelDependentCapacity& lc) {
  if (lc.breakpoints.empty() || lc.slices.size() != lc.breakpoints.size())
    return {ValidationReport::Kind::Structural, "need one capacity slice per breakpoint"};
  double prev = 0.0;
  for (double t : lc.breakpoints) {
    if (t <= prev + kEps)
      return {ValidationReport::Kind::Structural, "breakpoints must be strictly increasing"};
    prev = t;
  }
  const int n = lc.slices.front().ground_size();
  for (const Capacity& m : lc.slices) {
    if (m.ground_size() != n)
      return {ValidationReport::Kind::Structural, "slice arity mismatch"};
    auto r = validate_capacity(m);
    if (!r.ok()) return r;
  }
  return {};
}

double level_dependent_choquet(const LevelDependentCapacity& lc, const NNVector& x) {
  if (lc.slices.empty()) throw std::invalid_argument("level capacity has no slices");
  const int n = lc.slices.front().ground_size();
  if (int(x.size()) != n) throw std::invalid_argument("vector arity mismatch");
  const double top = *std::max_element(x.begin(), x.end());
  if (top <= kEps) return 0.0;
  if (!lc.final_unbounded && top > lc.breakpoints.back() + kEps)
    throw std::domain_error("vector exceeds the covered level range");

  std::vector<double> cuts{0.0};
  for (double t : lc.breakpoints)
    if (t < top - kEps) cuts.push_back(t);
  for (double xi : x)
    if (xi > kEps && xi < top - kEps) cuts.push_back(xi);
  cuts.push_back(top);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::fabs(a - b) < kEps; }),
             cuts.end());

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    SubsetMask level = 0;
    for (int i = 0; i < n; ++i)
      if (x[i] >= b - kEps) level |= SubsetMask(1) << i;
    // Slice whose interval [t_{j-1}, t_j) contains (a, b).
    std::size_t j = 0;
    while (j + 1 < lc.breakpoints.size() && lc.breakpoints[j] <= a + kEps) ++j;
    if (lc.breakpoints[j] <= a + kEps) j = lc.breakpoints.size() - 1;  // final slice overflow
    total += (b - a) * lc.slices[j].at(level);
  }
  return total;
}

}  // namespace decompint
