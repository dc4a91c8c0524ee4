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

#include "decompint/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace decompint {
namespace {

// Dense two-phase tableau simplex.  Columns are laid out as
// [structural | slack/surplus | artificial]; `basis[r]` names the column
// basic in row r.  All pivots use Bland's rule, so the iteration count is
// finite without perturbation tricks.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, double eps) : eps_(eps), nvars_(lp.num_vars()) {
    const std::size_t m = lp.num_rows();
    // Normalize to rhs >= 0.
    std::vector<std::vector<double>> rows(m);
    std::vector<double> rhs(m);
    std::vector<ConstraintSense> senses(m);
    for (std::size_t r = 0; r < m; ++r) {
      rows[r] = lp.rows[r];
      rows[r].resize(nvars_, 0.0);
      rhs[r] = lp.rhs[r];
      senses[r] = lp.senses[r];
      if (rhs[r] < 0) {
        for (double& v : rows[r]) v = -v;
        rhs[r] = -rhs[r];
        if (senses[r] == ConstraintSense::LessEq)
          senses[r] = ConstraintSense::GreaterEq;
        else if (senses[r] == ConstraintSense::GreaterEq)
          senses[r] = ConstraintSense::LessEq;
      }
    }
    std::size_t nslack = 0, nart = 0;
    for (auto s : senses) {
      if (s != ConstraintSense::Equal) ++nslack;
      if (s != ConstraintSense::LessEq) ++nart;
    }
    ncols_ = nvars_ + nslack + nart;
    art_begin_ = nvars_ + nslack;
    t_.assign(m, std::vector<double>(ncols_ + 1, 0.0));
    basis_.assign(m, 0);
    std::size_t slack_at = nvars_, art_at = art_begin_;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t j = 0; j < nvars_; ++j) t_[r][j] = rows[r][j];
      t_[r][ncols_] = rhs[r];
      switch (senses[r]) {
        case ConstraintSense::LessEq:
          t_[r][slack_at] = 1.0;
          basis_[r] = slack_at++;
          break;
        case ConstraintSense::GreaterEq:
          t_[r][slack_at] = -1.0;
          ++slack_at;
          t_[r][art_at] = 1.0;
          basis_[r] = art_at++;
          break;
        case ConstraintSense::Equal:
          t_[r][art_at] = 1.0;
          basis_[r] = art_at++;
          break;
      }
    }
    live_.assign(m, true);
  }

  // Returns false when the artificial infeasibility cannot be driven to 0.
  bool phase1() {
    if (art_begin_ == ncols_) return true;
    std::vector<double> c(ncols_, 0.0);
    for (std::size_t j = art_begin_; j < ncols_; ++j) c[j] = -1.0;
    run(c, /*allow_artificial=*/true);
    double infeas = 0.0;
    for (std::size_t r = 0; r < t_.size(); ++r)
      if (live_[r] && basis_[r] >= art_begin_) infeas += t_[r][ncols_];
    if (infeas > 1e-7) return false;
    // Pivot lingering zero-valued artificials out of the basis; rows that
    // offer no pivot are redundant and get dropped.
    for (std::size_t r = 0; r < t_.size(); ++r) {
      if (!live_[r] || basis_[r] < art_begin_) continue;
      std::size_t enter = ncols_;
      for (std::size_t j = 0; j < art_begin_; ++j) {
        if (std::fabs(t_[r][j]) > eps_) {
          enter = j;
          break;
        }
      }
      if (enter == ncols_) {
        live_[r] = false;
      } else {
        pivot(r, enter);
      }
    }
    return true;
  }

  // Maximizes c over the current feasible dictionary.  Returns false when
  // the objective is unbounded above.
  bool phase2(const std::vector<double>& objective) {
    std::vector<double> c(ncols_, 0.0);
    for (std::size_t j = 0; j < nvars_ && j < objective.size(); ++j) c[j] = objective[j];
    return run(c, /*allow_artificial=*/false);
  }

  std::vector<double> solution() const {
    std::vector<double> x(nvars_, 0.0);
    for (std::size_t r = 0; r < t_.size(); ++r)
      if (live_[r] && basis_[r] < nvars_) x[basis_[r]] = t_[r][ncols_];
    return x;
  }

 private:
  void pivot(std::size_t prow, std::size_t pcol) {
    const double p = t_[prow][pcol];
    for (double& v : t_[prow]) v /= p;
    for (std::size_t r = 0; r < t_.size(); ++r) {
      if (r == prow || !live_[r]) continue;
      const double f = t_[r][pcol];
      if (std::fabs(f) < eps_) {
        t_[r][pcol] = 0.0;
        continue;
      }
      for (std::size_t j = 0; j <= ncols_; ++j) t_[r][j] -= f * t_[prow][j];
      t_[r][pcol] = 0.0;
    }
    basis_[prow] = pcol;
  }

  bool run(const std::vector<double>& c, bool allow_artificial) {
    const std::size_t limit = allow_artificial ? ncols_ : art_begin_;
    while (true) {
      // Reduced costs from scratch each iteration: z_j = c_j - c_B B^-1 A_j.
      // Desk-scale problems make the O(m * ncols) recompute affordable and
      // immune to drift.
      std::vector<double> z(limit, 0.0);
      for (std::size_t j = 0; j < limit; ++j) z[j] = c[j];
      for (std::size_t r = 0; r < t_.size(); ++r) {
        if (!live_[r]) continue;
        const double cb = c[basis_[r]];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j < limit; ++j) z[j] -= cb * t_[r][j];
      }
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (basis_contains(j)) continue;
        if (z[j] > 1e-9) {
          enter = j;
          break;  // Bland: smallest improving index
        }
      }
      if (enter == limit) return true;
      std::size_t leave = t_.size();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < t_.size(); ++r) {
        if (!live_[r] || t_[r][enter] <= eps_) continue;
        const double ratio = t_[r][ncols_] / t_[r][enter];
        if (ratio < best - eps_ ||
            (ratio < best + eps_ && (leave == t_.size() || basis_[r] < basis_[leave]))) {
          best = ratio;
          leave = r;
        }
      }
      if (leave == t_.size()) return false;  // unbounded direction
      pivot(leave, enter);
    }
  }

  bool basis_contains(std::size_t j) const {
    for (std::size_t r = 0; r < basis_.size(); ++r)
      if (live_[r] && basis_[r] == j) return true;
    return false;
  }

  double eps_;
  std::size_t nvars_, ncols_, art_begin_;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
  std::vector<bool> live_;
};

double objective_value(const LinearProgram& lp, const std::vector<double>& x) {
  double v = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) v += lp.objective[j] * x[j];
  return v;
}

}  // namespace

LPSolution simplex_solve(const LinearProgram& lp, const LPOptions& opts) {
  if (lp.rows.size() != lp.senses.size() || lp.rows.size() != lp.rhs.size())
    throw std::invalid_argument("lp: inconsistent row data");
  Tableau tab(lp, opts.eps);
  LPSolution out;
  if (!tab.phase1()) {
    out.status = LPStatus::Infeasible;
    return out;
  }
  std::vector<double> c = lp.objective;
  if (!lp.maximize)
    for (double& v : c) v = -v;
  if (!tab.phase2(c)) {
    out.status = LPStatus::Unbounded;
    return out;
  }
  out.status = LPStatus::Optimal;
  out.x = tab.solution();
  out.value = objective_value(lp, out.x);
  return out;
}

LPSolution dual_bound(const LinearProgram& lp, const LPOptions& opts) {
  return simplex_solve(lp, opts);
}

LPSolution bnb_solve(const LinearProgram& lp, const LPOptions& opts) {
  bool any_integer = false;
  for (bool b : lp.integer) any_integer |= b;
  if (!any_integer) return simplex_solve(lp, opts);

  struct Node {
    std::vector<std::pair<std::size_t, double>> uppers;  // x_j <= u
    std::vector<std::pair<std::size_t, double>> lowers;  // x_j >= l
  };

  const double sign = lp.maximize ? 1.0 : -1.0;
  LPSolution incumbent;
  bool have_incumbent = false;
  long long nodes = 0;
  bool budget_hit = false;

  std::vector<Node> stack{Node{}};
  while (!stack.empty()) {
    if (nodes >= opts.node_budget) {
      budget_hit = true;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    ++nodes;

    LinearProgram sub = lp;
    for (auto [j, u] : node.uppers) {
      std::vector<double> row(lp.num_vars(), 0.0);
      row[j] = 1.0;
      sub.add_row(std::move(row), ConstraintSense::LessEq, u);
    }
    for (auto [j, l] : node.lowers) {
      std::vector<double> row(lp.num_vars(), 0.0);
      row[j] = 1.0;
      sub.add_row(std::move(row), ConstraintSense::GreaterEq, l);
    }
    LPSolution relax = simplex_solve(sub, opts);
    if (relax.status == LPStatus::Infeasible) continue;
    if (relax.status == LPStatus::Unbounded) {
      relax.nodes = nodes;
      return relax;
    }
    if (have_incumbent && sign * relax.value <= sign * incumbent.value + opts.eps) continue;

    // Most fractional marked variable (fraction nearest 1/2).
    std::size_t branch = lp.num_vars();
    double best_dist = 0.5;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
      if (j >= lp.integer.size() || !lp.integer[j]) continue;
      const double frac = relax.x[j] - std::floor(relax.x[j]);
      const double dist = std::fabs(frac - 0.5);
      if (frac > opts.int_tol && frac < 1.0 - opts.int_tol && dist < best_dist - 1e-12) {
        best_dist = dist;
        branch = j;
      }
    }
    if (branch == lp.num_vars()) {
      for (std::size_t j = 0; j < lp.num_vars(); ++j)
        if (j < lp.integer.size() && lp.integer[j]) relax.x[j] = std::round(relax.x[j]);
      relax.value = objective_value(lp, relax.x);
      if (!have_incumbent || sign * relax.value > sign * incumbent.value) {
        incumbent = relax;
        have_incumbent = true;
      }
      continue;
    }
    const double v = relax.x[branch];
    Node up = node, down = node;
    down.uppers.emplace_back(branch, std::floor(v));
    up.lowers.emplace_back(branch, std::ceil(v));
    stack.push_back(std::move(up));
    stack.push_back(std::move(down));  // explore the floor branch first
  }

  LPSolution out;
  if (budget_hit) {
    out = have_incumbent ? incumbent : LPSolution{};
    out.status = LPStatus::BudgetExceeded;
  } else if (have_incumbent) {
    out = incumbent;
    out.status = LPStatus::Optimal;
  } else {
    out.status = LPStatus::Infeasible;
  }
  out.nodes = nodes;
  return out;
}

}  // namespace decompint
