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

#include "decompint/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <variant>

#include "decompint/weighting.hpp"

namespace decompint {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_covered(const NNVector& r) {
  return std::all_of(r.begin(), r.end(), [](double v) { return v <= kEps; });
}

NNVector scale_vec(const NNVector& g, double c) {
  NNVector out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i] * c;
  return out;
}

double mass(const NNVector& g) { return std::accumulate(g.begin(), g.end(), 0.0); }

/// One odometer digit: each count adds `unit` to the running sum, is worth
/// `w`, and shows up in witnesses as `coeff` (1 for verbatim members, the
/// lattice spacing for real coefficients) applied to `gen`.
struct Column {
  NNVector gen;
  NNVector unit;
  double w = 0.0;
  double coeff = 1.0;
};

/// Most counts of `unit` that still fit under budget r (sub direction).
long long fit_count(const NNVector& unit, const NNVector& r) {
  double c = kInf;
  for (std::size_t i = 0; i < unit.size(); ++i)
    if (unit[i] > kEps) c = std::min(c, r[i] / unit[i]);
  if (c == kInf || c < 0) return c == kInf ? 0 : 0;
  return static_cast<long long>(std::floor(c + kEps));
}

/// Fewest counts of `unit` that cover every still-positive coordinate it
/// touches; more copies than this are never part of an optimal cover.
long long cover_count(const NNVector& unit, const NNVector& r) {
  long long c = 0;
  for (std::size_t i = 0; i < unit.size(); ++i)
    if (unit[i] > kEps && r[i] > kEps)
      c = std::max(c, static_cast<long long>(std::ceil(r[i] / unit[i] - kEps)));
  return c;
}

/// Can `rem` be partitioned exactly by the listed supports?  Zero-weight
/// filler blocks make this the admissibility condition for real-coefficient
/// partition systems.
bool exact_cover(SubsetMask rem, const std::vector<SubsetMask>& supports) {
  if (rem == 0) return true;
  const SubsetMask low = rem & (~rem + 1);
  for (SubsetMask s : supports)
    if ((s & low) && (s & ~rem) == 0 && exact_cover(rem & ~s, supports)) return true;
  return false;
}

struct BruteSearch {
  const Base& b;
  const NNVector& x;
  const bool super;
  const OracleOptions& opts;

  std::vector<Column> cols;
  bool real = false;
  bool plain = false;  // no structural constraint: covers close branches early
  std::vector<SubsetMask> suffix_supp;
  std::vector<SubsetMask> supports;
  double best_rate = 0.0;            // sub: max value per unit of mass
  std::vector<double> cover_rate;    // super: min cost per unit of coordinate i
  double cover_mass_rate = kInf;     // super: min cost per unit of mass
  std::vector<NNVector> prices;      // super: per-coordinate cover prices

  long long nodes = 0;
  bool found = false;
  double best = 0.0;
  std::vector<long long> counts;
  std::vector<long long> best_counts;

  BruteSearch(const Base& bb, const NNVector& xx, bool sup, const OracleOptions& oo)
      : b(bb), x(xx), super(sup), opts(oo) {
    if (b.system.coeff_domain == CoeffDomain::NonNegReal && !is_homogeneous(b.weighting))
      throw OracleRefusal(
          "real coefficients over a non-homogeneous weighting have no finite member lattice");
    real = b.system.coeff_domain == CoeffDomain::NonNegReal;
    plain = b.system.constraint.kind == CollectionConstraint::Kind::Any;
    for (const NNVector& g : materialize_generators(b.system)) {
      Column c;
      c.gen = g;
      c.coeff = real ? opts.coeff_step : 1.0;
      c.unit = real ? scale_vec(g, opts.coeff_step) : g;
      auto v = evaluate(b.weighting, c.unit);
      if (!v) continue;  // outside the weighting's domain: never a member
      c.w = *v;
      cols.push_back(std::move(c));
    }
    // Digits in cost-per-mass order (cheapest first when covering, richest
    // first when packing) let the bounds close branches near the root.  The
    // walk over this fixed order stays deterministic.
    std::stable_sort(cols.begin(), cols.end(), [&](const Column& a, const Column& c) {
      const double ra = mass(a.unit) > kEps ? a.w / mass(a.unit) : kInf;
      const double rc = mass(c.unit) > kEps ? c.w / mass(c.unit) : kInf;
      return super ? ra < rc : ra > rc;
    });
    const std::size_t m = cols.size();
    suffix_supp.assign(m + 1, 0);
    for (std::size_t j = m; j-- > 0;)
      suffix_supp[j] = suffix_supp[j + 1] | support_mask(cols[j].unit);
    for (const Column& c : cols) supports.push_back(support_mask(c.gen));
    cover_rate.assign(x.size(), kInf);
    for (const Column& c : cols) {
      if (mass(c.unit) > kEps) {
        best_rate = std::max(best_rate, c.w / mass(c.unit));
        cover_mass_rate = std::min(cover_mass_rate, c.w / mass(c.unit));
      }
      for (std::size_t i = 0; i < x.size(); ++i)
        if (c.unit[i] > kEps) cover_rate[i] = std::min(cover_rate[i], c.w / c.unit[i]);
    }
    if (super) build_prices();
    counts.assign(m, 0);
    best = super ? kInf : 0.0;
    found = !super;  // sub: the empty collection already realizes 0
  }

  /// Collects price vectors p >= 0 with unit_j . p <= w_j for every column.
  /// Weak duality then bounds any cover of a remainder r from below by
  /// r . p, so the bound stays valid no matter how few vectors are found.
  void build_prices() {
    const std::size_t n = x.size(), m = cols.size();
    // The per-coordinate rates scaled down until no column is undercut.
    NNVector shrunk(n, 0.0);
    double shrink = 1.0;
    for (const Column& c : cols) {
      double charge = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (c.unit[i] > kEps && cover_rate[i] < kInf) charge += cover_rate[i] * c.unit[i];
      if (charge > c.w + kEps && c.w > 0) shrink = std::max(shrink, charge / c.w);
    }
    for (std::size_t i = 0; i < n; ++i)
      if (cover_rate[i] < kInf) shrunk[i] = cover_rate[i] / shrink;
    prices.push_back(shrunk);
    if (n > 6 || m + n > 26) return;  // vertex enumeration priced out
    // Every vertex of the price polytope solves n of the constraints
    // (columns at equality or a coordinate at zero) as a square system.
    std::vector<std::size_t> pick;
    std::vector<std::vector<double>> rows;
    std::function<void(std::size_t)> choose = [&](std::size_t from) {
      if (pick.size() == n) {
        std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
        for (std::size_t r = 0; r < n; ++r) {
          if (pick[r] < m) {
            for (std::size_t i = 0; i < n; ++i) a[r][i] = cols[pick[r]].unit[i];
            a[r][n] = cols[pick[r]].w;
          } else {
            a[r][pick[r] - m] = 1.0;
          }
        }
        NNVector p(n, 0.0);
        if (gauss(a, &p)) {
          bool ok = true;
          for (std::size_t i = 0; i < n && ok; ++i) ok = p[i] >= -1e-9;
          for (const Column& c : cols) {
            if (!ok) break;
            double charge = 0.0;
            for (std::size_t i = 0; i < n; ++i) charge += c.unit[i] * std::max(p[i], 0.0);
            ok = charge <= c.w + 1e-9 * (1.0 + std::fabs(c.w));
          }
          if (ok) {
            for (double& v : p) v = std::max(v, 0.0);
            prices.push_back(std::move(p));
          }
        }
        return;
      }
      for (std::size_t j = from; j < m + n; ++j) {
        pick.push_back(j);
        choose(j + 1);
        pick.pop_back();
      }
    };
    choose(0);
  }

  static bool gauss(std::vector<std::vector<double>>& a, NNVector* out) {
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
      if (std::fabs(a[piv][c]) < 1e-12) return false;
      std::swap(a[c], a[piv]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c) continue;
        const double f = a[r][c] / a[c][c];
        for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
      }
    }
    for (std::size_t c = 0; c < n; ++c) (*out)[c] = a[c][n] / a[c][c];
    return true;
  }

  /// Cheapest possible completion cost given the uncovered remainder.
  double cover_bound(const NNVector& r) const {
    double lb = 0.0, total = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i] > kEps) {
        if (cover_rate[i] == kInf) return kInf;
        lb = std::max(lb, r[i] * cover_rate[i]);
        total += r[i];
      }
    if (cover_mass_rate < kInf) lb = std::max(lb, total * cover_mass_rate);
    for (const NNVector& p : prices) {
      double dot = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] > kEps) dot += r[i] * p[i];
      lb = std::max(lb, dot);
    }
    return lb;
  }

  /// Expanded member list of the current assignment, in witness convention.
  std::vector<NNVector> members(const std::vector<long long>& u) const {
    std::vector<NNVector> out;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (u[j] == 0) continue;
      if (real) {
        out.push_back(scale_vec(cols[j].gen, double(u[j]) * cols[j].coeff));
      } else {
        for (long long c = 0; c < u[j]; ++c) out.push_back(cols[j].gen);
      }
    }
    return out;
  }

  bool admissible(const std::vector<long long>& u) const {
    const auto& con = b.system.constraint;
    if (con.kind == CollectionConstraint::Kind::Partition && real) {
      // Real partitions may pad with zero-coefficient blocks, so only the
      // carrying supports must be disjoint and the rest exactly fillable.
      SubsetMask used = 0;
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (u[j] == 0) continue;
        if (used & supports[j]) return false;
        used |= supports[j];
      }
      const SubsetMask full = (SubsetMask(1) << b.system.n) - 1;
      return exact_cover(full & ~used, supports);
    }
    return collection_satisfies(con, members(u));
  }

  void offer(double value, const std::vector<long long>& u) {
    if (!plain && !admissible(u)) return;
    if (super ? value < best : value > best) {
      best = value;
      best_counts = u;
      found = true;
    }
  }

  void step() {
    if (++nodes > opts.space_limit) throw OracleRefusal("search space exceeds the node limit");
  }

  void dive_sub(std::size_t d, const NNVector& r, double value) {
    step();
    if (!plain) offer(value, counts);
    if (d == cols.size()) return;
    if (plain && value + mass(r) * best_rate <= best) return;  // cannot beat the incumbent
    if (plain && d + 1 == cols.size()) {
      // Last digit: the largest fitting count is optimal outright.
      counts[d] = fit_count(cols[d].unit, r);
      offer(value + double(counts[d]) * cols[d].w, counts);
      counts[d] = 0;
      return;
    }
    const long long cap = fit_count(cols[d].unit, r);
    NNVector rr = r;
    for (long long u = 0; u <= cap; ++u) {
      counts[d] = u;
      dive_sub(d + 1, rr, value + double(u) * cols[d].w);
      counts[d] = 0;
      if (u < cap)
        for (std::size_t i = 0; i < rr.size(); ++i) rr[i] -= cols[d].unit[i];
    }
  }

  void dive_super(std::size_t d, const NNVector& r, double value) {
    step();
    const bool covered = all_covered(r);
    if (covered) {
      offer(value, counts);
      if (plain) return;  // more members only cost more
    }
    // The margin absorbs the feasibility tolerance baked into the prices,
    // so a branch can only be cut when it provably cannot win.
    if (found && value + cover_bound(r) >= best + 1e-9) return;
    if (d == cols.size()) return;
    if (!covered && (support_mask(r) & ~suffix_supp[d]) != 0) return;  // unreachable demand
    if (plain && d + 1 == cols.size()) {
      if ((support_mask(r) & ~support_mask(cols[d].unit)) == 0) {
        counts[d] = cover_count(cols[d].unit, r);
        offer(value + double(counts[d]) * cols[d].w, counts);
        counts[d] = 0;
      }
      return;
    }
    const long long cap = cover_count(cols[d].unit, r);
    NNVector rr = r;
    for (long long u = 0; u <= cap; ++u) {
      counts[d] = u;
      dive_super(d + 1, rr, value + double(u) * cols[d].w);
      counts[d] = 0;
      if (u < cap)
        for (std::size_t i = 0; i < rr.size(); ++i) rr[i] -= cols[d].unit[i];
    }
  }

  /// Seeds the incumbent with cheap covers so pruning bites from the start:
  /// every single-column cover, then a greedy fill by cost per useful mass.
  void seed_covers() {
    if (!plain) return;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if ((support_mask(x) & ~support_mask(cols[j].unit)) != 0) continue;
      std::vector<long long> u(cols.size(), 0);
      u[j] = cover_count(cols[j].unit, x);
      offer(double(u[j]) * cols[j].w, u);
    }
    std::vector<long long> u(cols.size(), 0);
    NNVector r = x;
    double value = 0.0;
    for (long long rounds = 0; rounds < 100000 && !all_covered(r); ++rounds) {
      std::size_t pick = cols.size();
      double rate = kInf;
      for (std::size_t j = 0; j < cols.size(); ++j) {
        double useful = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i)
          if (r[i] > kEps) useful += std::min(cols[j].unit[i], r[i]);
        if (useful > kEps && cols[j].w / useful < rate - kEps) {
          rate = cols[j].w / useful;
          pick = j;
        }
      }
      if (pick == cols.size()) return;
      ++u[pick];
      value += cols[pick].w;
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= cols[pick].unit[i];
    }
    if (all_covered(r)) offer(value, u);
  }

  OracleResult run() {
    if (super) {
      seed_covers();
      // seeded incumbents guide pruning but are rediscovered by the walk,
      // so the reported collection stays odometer-deterministic unless the
      // seed itself is optimal.
      dive_super(0, x, 0.0);
    } else {
      if (!plain) best_counts.assign(cols.size(), 0);
      dive_sub(0, x, 0.0);
    }
    OracleResult out;
    out.nodes = nodes;
    if (!found) {
      out.feasible = false;
      return out;
    }
    out.value = best;
    for (std::size_t j = 0; j < best_counts.size(); ++j)
      if (best_counts[j] > 0) {
        if (real)
          out.collection.push_back({cols[j].gen, double(best_counts[j]) * cols[j].coeff});
        else
          out.collection.push_back({cols[j].gen, double(best_counts[j])});
      }
    return out;
  }
};

OracleResult brute_fixed(const Base& b, const NNVector& x, bool super) {
  const auto& fixed = std::get<FixedCollections>(b.system.generators);
  OracleResult out;
  out.feasible = !super;
  bool found = !super;
  double best = super ? kInf : 0.0;
  const std::vector<NNVector>* pick = nullptr;
  for (const auto& collection : fixed.collections) {
    ++out.nodes;
    NNVector total(x.size(), 0.0);
    double value = 0.0;
    bool valued = true;
    for (const NNVector& y : collection) {
      auto v = evaluate(b.weighting, y);
      if (!v) {
        valued = false;
        break;
      }
      value += *v;
      for (std::size_t i = 0; i < x.size(); ++i) total[i] += y[i];
    }
    if (!valued) continue;
    const bool ok = super ? leq(x, total) : leq(total, x);
    if (!ok) continue;
    if (super ? value < best : value > best) {
      best = value;
      pick = &collection;
      found = true;
    }
  }
  if (!found) {
    out.feasible = false;
    return out;
  }
  out.feasible = true;
  out.value = best;
  if (pick)
    for (const NNVector& y : *pick) out.collection.push_back({y, 1.0});
  return out;
}

}  // namespace

OracleResult brute_sub(const Base& b, const NNVector& x, const OracleOptions& opts) {
  if (int(x.size()) != b.system.n) throw std::invalid_argument("query dimension mismatch");
  if (all_covered(x)) return {true, 0.0, {}, 0};
  if (std::holds_alternative<FullOrthant>(b.system.generators))
    throw OracleRefusal("the full orthant has no finite member lattice");
  if (std::holds_alternative<FixedCollections>(b.system.generators))
    return brute_fixed(b, x, false);
  BruteSearch s(b, x, false, opts);
  return s.run();
}

OracleResult brute_super(const Base& b, const NNVector& x, const OracleOptions& opts) {
  if (int(x.size()) != b.system.n) throw std::invalid_argument("query dimension mismatch");
  if (all_covered(x)) return {true, 0.0, {}, 0};
  if (std::holds_alternative<FullOrthant>(b.system.generators))
    throw OracleRefusal("the full orthant has no finite member lattice");
  if (std::holds_alternative<FixedCollections>(b.system.generators))
    return brute_fixed(b, x, true);
  BruteSearch s(b, x, true, opts);
  return s.run();
}

double brute_partitions(const Capacity& m, const NNVector& x) {
  const int n = m.ground_size();
  if (int(x.size()) != n) throw std::invalid_argument("query dimension mismatch");
  if (n > 10) throw OracleRefusal("partition enumeration limited to n <= 10");
  std::vector<int> block(n, 0);
  double best = 0.0;
  // Restricted growth strings: element i may join blocks 0..k where k is the
  // number of blocks opened so far; every set partition appears exactly once.
  std::function<void(int, int)> rec = [&](int i, int opened) {
    if (i == n) {
      double total = 0.0;
      for (int bl = 0; bl < opened; ++bl) {
        SubsetMask e = 0;
        double lo = kInf;
        for (int j = 0; j < n; ++j)
          if (block[j] == bl) {
            e |= SubsetMask(1) << j;
            lo = std::min(lo, x[j]);
          }
        total += m.at(e) * lo;
      }
      best = std::max(best, total);
      return;
    }
    for (int bl = 0; bl <= opened; ++bl) {
      block[i] = bl;
      rec(i + 1, std::max(opened, bl + 1));
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace decompint
