// Copyright 2026 The corecut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CORECUT_ORACLE_HPP
#define CORECUT_ORACLE_HPP

// Brute-force ground truth on small instances.  Everything here enumerates:
// blocking checks walk all 2^N - 1 coalitions with one max-min LP each, and
// core-emptiness evidence sweeps a grid over the grand design space.  The
// formulations are written out locally on purpose so this module stays an
// independent check on the search-based membership solver.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "corecut/errors.hpp"
#include "corecut/game.hpp"
#include "corecut/linear_program.hpp"
#include "corecut/simplex.hpp"

namespace corecut::oracle {

struct Objection {
  double epsilon = 0.0;
  Coalition coalition;
  DesignPlan plan;
  Vec utilities;  // restricted to coalition members, in member order
};

struct OracleVerdict {
  bool blocked = false;
  std::optional<Objection> best;        // present exactly when blocked
  double max_least_objection = 0.0;     // max over coalitions, any sign
  long coalitions_checked = 0;
};

namespace detail {

/// max over x in X(S) of min_{i in S} (v_i.x - u*_i): the coalition's best
/// guaranteed additive gain against u*.
inline Objection coalition_gain(const Game& game, const Coalition& coalition, const Vec& u_star) {
  const int J = game.num_goods();
  const int vars = J + 1;  // (x, t)
  LinearProgram lp;
  lp.maximize = true;
  lp.objective.assign(static_cast<std::size_t>(vars), 0.0);
  lp.objective[static_cast<std::size_t>(J)] = 1.0;
  lp.lower.assign(static_cast<std::size_t>(vars), 0.0);
  lp.upper.assign(static_cast<std::size_t>(vars), kInf);
  lp.lower[static_cast<std::size_t>(J)] = -kInf;
  const Vec budget = pooled_endowment_d(game, coalition);
  for (int k = 0; k < game.num_resources(); ++k) {
    Vec row(static_cast<std::size_t>(vars), 0.0);
    for (int j = 0; j < J; ++j) row[static_cast<std::size_t>(j)] = game.production_d()[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    lp.add_row(std::move(row), RowSense::LessEqual, budget[static_cast<std::size_t>(k)]);
  }
  for (int i : coalition.members()) {
    Vec row(static_cast<std::size_t>(vars), 0.0);
    for (int j = 0; j < J; ++j) row[static_cast<std::size_t>(j)] = -game.valuation_d(i)[static_cast<std::size_t>(j)];
    row[static_cast<std::size_t>(J)] = 1.0;
    lp.add_row(std::move(row), RowSense::LessEqual, -u_star[static_cast<std::size_t>(i)]);
  }
  const auto sol = lp::solve(lp);
  if (sol.status != LpStatus::Optimal) throw Error("coalition gain LP failed to solve");
  Objection out;
  out.epsilon = sol.objective_value;
  out.coalition = coalition;
  out.plan.x.assign(sol.x.begin(), sol.x.begin() + J);
  out.utilities.reserve(coalition.members().size());
  for (int i : coalition.members()) out.utilities.push_back(evaluate_utility(game, i, out.plan));
  return out;
}

}  // namespace detail

/// Walks every nonempty coalition; blocked iff some coalition improves every
/// member strictly (gain above 1e-9).  `best` maximizes the least gain, ties
/// resolved toward the earlier coalition in mask order.
inline OracleVerdict is_blocked_exact(const Game& game, const UtilityVector& u_star) {
  const int n = game.num_players();
  if (n > 16) throw TooManyPlayers("exact blocking check enumerates 2^N - 1 coalitions; capped at 16 players");
  if (static_cast<int>(u_star.u.size()) != n) throw DimensionMismatch("utility vector length != player count");
  OracleVerdict verdict;
  std::optional<Objection> best;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const Coalition coalition = Coalition::from_mask(mask);
    Objection objection = detail::coalition_gain(game, coalition, u_star.u);
    ++verdict.coalitions_checked;
    if (!best || objection.epsilon > best->epsilon + 1e-12) best = std::move(objection);
  }
  verdict.max_least_objection = best ? best->epsilon : 0.0;
  verdict.blocked = best && best->epsilon > 1e-9;
  if (verdict.blocked) verdict.best = std::move(best);
  return verdict;
}

struct CoreEvidence {
  bool found = false;
  UtilityVector point;
  DesignPlan plan;
  double resolution = 0.0;
  long samples = 0;
};

/// Sweeps grand-coalition plans over a grid of X(N); reports the first grid
/// sample no coalition can block, or that none exists at this resolution.
/// Sampling evidence, not a decision procedure.
inline CoreEvidence core_empty_evidence(const Game& game, double resolution) {
  const int n = game.num_players();
  const int J = game.num_goods();
  if (n > 4) throw TooManyPlayers("core evidence sweep capped at 4 players");
  if (J > 3) throw TooManyGoods("core evidence sweep capped at 3 goods");
  if (resolution <= 0.0) throw Error("resolution must be positive");

  CoreEvidence evidence;
  evidence.resolution = resolution;
  const Coalition grand = Coalition::full(n);
  const Vec budget = pooled_endowment_d(game, grand);

  // Bounding box of X(N), one tiny LP per coordinate.
  Vec box(static_cast<std::size_t>(J), 0.0);
  {
    const auto system = design_space(game, grand);
    LinearProgram lp(system, true, Vec(static_cast<std::size_t>(J), 0.0));
    for (int j = 0; j < J; ++j) {
      lp.objective[static_cast<std::size_t>(j)] = 1.0;
      const auto sol = lp::solve(lp);
      lp.objective[static_cast<std::size_t>(j)] = 0.0;
      if (sol.status != LpStatus::Optimal) throw Error("grand design space is not bounded");
      box[static_cast<std::size_t>(j)] = sol.objective_value;
    }
  }
  std::vector<long> steps(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) steps[static_cast<std::size_t>(j)] = static_cast<long>(box[static_cast<std::size_t>(j)] / resolution + 1e-9);

  Vec x(static_cast<std::size_t>(J), 0.0);
  std::vector<long> idx(static_cast<std::size_t>(J), 0);
  for (;;) {
    for (int j = 0; j < J; ++j) x[static_cast<std::size_t>(j)] = static_cast<double>(idx[static_cast<std::size_t>(j)]) * resolution;
    bool inside = true;
    for (int k = 0; k < game.num_resources() && inside; ++k) {
      double act = 0.0;
      for (int j = 0; j < J; ++j) act += game.production_d()[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      inside = act <= budget[static_cast<std::size_t>(k)] + 1e-9;
    }
    if (inside) {
      ++evidence.samples;
      UtilityVector u;
      u.u.assign(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i) u.u[static_cast<std::size_t>(i)] = evaluate_utility(game, i, DesignPlan{x});
      // Cheap pre-filter: a sample the grand coalition itself can strictly
      // improve (Pareto-dominated) is blocked; skip the full enumeration.
      const auto grand_gain = detail::coalition_gain(game, grand, u.u);
      if (grand_gain.epsilon <= 1e-9) {
        const auto verdict = is_blocked_exact(game, u);
        if (!verdict.blocked) {
          evidence.found = true;
          evidence.point = u;
          evidence.plan.x = x;
          return evidence;
        }
      }
    }
    // Advance the mixed-radix grid index.
    int j = 0;
    for (; j < J; ++j) {
      if (idx[static_cast<std::size_t>(j)] < steps[static_cast<std::size_t>(j)]) {
        ++idx[static_cast<std::size_t>(j)];
        break;
      }
      idx[static_cast<std::size_t>(j)] = 0;
    }
    if (j == J) break;
  }
  return evidence;
}

struct BalancedCollection {
  std::vector<Coalition> coalitions;
  Vec weights;
};

namespace detail {

/// Feasibility of balancing weights with support exactly on `masks`:
/// maximizes the smallest weight subject to sum_{S ni i} w_S = 1 for all i.
inline bool balancing_weights(const std::vector<std::uint64_t>& masks, int n, Vec& weights) {
  const int c = static_cast<int>(masks.size());
  LinearProgram lp;
  lp.maximize = true;
  lp.objective.assign(static_cast<std::size_t>(c + 1), 0.0);
  lp.objective[static_cast<std::size_t>(c)] = 1.0;  // t = min weight
  lp.lower.assign(static_cast<std::size_t>(c + 1), 0.0);
  lp.upper.assign(static_cast<std::size_t>(c + 1), kInf);
  lp.upper[static_cast<std::size_t>(c)] = 1.0;
  for (int i = 0; i < n; ++i) {
    Vec row(static_cast<std::size_t>(c + 1), 0.0);
    for (int s = 0; s < c; ++s)
      if (masks[static_cast<std::size_t>(s)] & (std::uint64_t{1} << i)) row[static_cast<std::size_t>(s)] = 1.0;
    lp.add_row(std::move(row), RowSense::Equal, 1.0);
  }
  for (int s = 0; s < c; ++s) {
    Vec row(static_cast<std::size_t>(c + 1), 0.0);
    row[static_cast<std::size_t>(s)] = -1.0;
    row[static_cast<std::size_t>(c)] = 1.0;
    lp.add_row(std::move(row), RowSense::LessEqual, 0.0);  // t <= w_S
  }
  const auto sol = lp::solve(lp);
  if (sol.status != LpStatus::Optimal || sol.objective_value <= 1e-9) return false;
  weights.assign(sol.x.begin(), sol.x.begin() + c);
  return true;
}

/// Full column rank of the player-by-coalition incidence matrix makes the
/// balancing weights unique, which characterizes minimal collections.
inline bool independent_incidence(const std::vector<std::uint64_t>& masks, int n) {
  const int c = static_cast<int>(masks.size());
  if (c > n) return false;
  std::vector<Vec> a(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(c), 0.0));
  for (int s = 0; s < c; ++s)
    for (int i = 0; i < n; ++i)
      if (masks[static_cast<std::size_t>(s)] & (std::uint64_t{1} << i)) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = 1.0;
  int rank = 0;
  for (int col = 0; col < c; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r)
      if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) > 1e-9) {
        piv = r;
        break;
      }
    if (piv < 0) return false;
    std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(rank)]);
    for (int r = 0; r < n; ++r) {
      if (r == rank) continue;
      const double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                       a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
      if (f == 0.0) continue;
      for (int k = col; k < c; ++k)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -= f * a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(k)];
    }
    ++rank;
  }
  return rank == c;
}

}  // namespace detail

/// All minimal balanced collections on n players, each with its (unique)
/// weight vector.  Exponential scan over subcollections; small n only.
inline std::vector<BalancedCollection> enumerate_balanced_collections(int n) {
  if (n > 4) throw TooManyPlayers("balanced collection enumeration capped at 4 players");
  if (n < 1) throw Error("need at least one player");
  const int coalition_count = (1 << n) - 1;
  std::vector<std::uint64_t> all_masks;
  for (std::uint64_t mask = 1; mask <= static_cast<std::uint64_t>(coalition_count); ++mask) all_masks.push_back(mask);

  std::vector<BalancedCollection> out;
  for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << coalition_count); ++pick) {
    std::vector<std::uint64_t> masks;
    for (int s = 0; s < coalition_count; ++s)
      if (pick & (std::uint64_t{1} << s)) masks.push_back(all_masks[static_cast<std::size_t>(s)]);
    if (static_cast<int>(masks.size()) > n) continue;  // cannot be independent
    std::uint64_t covered = 0;
    for (auto m : masks) covered |= m;
    if (covered != (std::uint64_t{1} << n) - 1) continue;
    if (!detail::independent_incidence(masks, n)) continue;
    Vec weights;
    if (!detail::balancing_weights(masks, n, weights)) continue;
    BalancedCollection collection;
    for (auto m : masks) collection.coalitions.push_back(Coalition::from_mask(m));
    collection.weights = std::move(weights);
    out.push_back(std::move(collection));
  }
  return out;
}

}  // namespace corecut::oracle

#endif  // CORECUT_ORACLE_HPP
